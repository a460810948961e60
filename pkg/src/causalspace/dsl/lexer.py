"""Tokenizer shared by the model and query grammars."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SourceError

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<number>\d+(?:\.\d+|/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[{}(),|&~*=;])
    """,
    re.VERBOSE,
)

KEYWORDS = frozenset({"truth", "belief", "bayes", "given", "do", "outcomes", "event", "cause"})


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "number" or "op"; "end" marks end of input
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1) -> list[Token]:
    """Tokenize one line of source. ``#`` starts a comment."""
    hash_at = text.find("#")
    if hash_at >= 0:
        text = text[:hash_at]
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SourceError("lex", f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), line, pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, len(text) + 1))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual expect/accept helpers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "name") and tok.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def expect_name(self, what: str = "a name") -> Token:
        tok = self.peek
        if tok.kind != "name" or tok.text in KEYWORDS:
            self.fail(f"expected {what}")
        return self.next()

    def expect_int(self) -> Token:
        tok = self.peek
        if tok.kind != "number" or not tok.text.isdigit():
            self.fail("expected a non-negative integer")
        return self.next()

    def expect_end(self) -> None:
        if self.peek.kind != "end":
            self.fail("unexpected trailing input")

    def fail(self, message: str):
        tok = self.peek
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise SourceError("parse", f"{message}, found {found}", tok.line, tok.column)
