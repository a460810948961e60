"""The ``.csp`` model format: parsing, rendering, elaboration and export.

One statement per line::

    outcomes 4
    event E1 = {0, 1}
    event E2 = {0, 2}
    cause P(E1 | *) = 1/2
    cause P(E2 | E1) = 1/3
    cause P(E2 | ~E1) = 0.25

The order of ``event`` lines is the order of the primitive events. A cause
condition is ``*`` (the whole universe) or a conjunction of literals over
strictly earlier events, and must pick out exactly one atom of the previous
level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..causal import (
    DEFAULT_MAX_EVENTS,
    CausalSpace,
    build_causal_space,
    check_entry,
    validate_primitive_sequence,
)
from ..errors import (
    AmbiguousCondition,
    CausalSpaceError,
    MissingEntry,
    SourceError,
    StaleCondition,
)
from ..events import DEFAULT_MAX_OUTCOMES, Event, Universe
from .lexer import TokenStream, tokenize


@dataclass(frozen=True)
class CondLiteral:
    name: str
    positive: bool = True
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)

    def __str__(self) -> str:
        return self.name if self.positive else "~" + self.name


@dataclass(frozen=True)
class EventDecl:
    name: str
    members: tuple[int, ...]
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class CauseStmt:
    """``cause P(event | condition) = value``; an empty condition is ``*``."""

    event: str
    condition: tuple[CondLiteral, ...]
    value: Fraction
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)
    value_column: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class ModelAST:
    outcomes: int
    events: tuple[EventDecl, ...]
    causes: tuple[CauseStmt, ...]
    outcomes_line: int = field(default=1, compare=False, repr=False)

    @property
    def names(self) -> dict[str, int]:
        """Event name to level (1-based)."""
        return {e.name: n for n, e in enumerate(self.events, start=1)}


def parse_rational(tok) -> Fraction:
    text = tok.text
    if tok.kind != "number":
        raise SourceError("parse", f"expected a rational, found {text!r}", tok.line, tok.column)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise SourceError("parse", f"malformed rational {text!r}", tok.line, tok.column) from None


def _parse_set(ts: TokenStream) -> tuple[int, ...]:
    ts.expect("{")
    members = []
    if not ts.accept("}"):
        while True:
            members.append(int(ts.expect_int().text))
            if ts.accept("}"):
                break
            ts.expect(",")
    return tuple(sorted(set(members)))


def _parse_line(tokens):
    ts = TokenStream(tokens)
    head = ts.peek
    if ts.accept("outcomes"):
        size = int(ts.expect_int().text)
        ts.expect_end()
        return ("outcomes", size, head)
    if ts.accept("event"):
        name = ts.expect_name("an event name")
        ts.expect("=")
        members = _parse_set(ts)
        ts.expect_end()
        return ("event", EventDecl(name.text, members, name.line, name.column), head)
    if ts.accept("cause"):
        p = ts.expect_name("'P'")
        if p.text != "P":
            raise SourceError("parse", f"expected 'P', found {p.text!r}", p.line, p.column)
        ts.expect("(")
        target = ts.expect_name("an event name")
        ts.expect("|")
        condition = []
        if not ts.accept("*"):
            while True:
                neg = ts.accept("~")
                lit = ts.expect_name("an event name")
                pos = neg or lit
                condition.append(CondLiteral(lit.text, neg is None, pos.line, pos.column))
                if not ts.accept("&"):
                    break
        ts.expect(")")
        ts.expect("=")
        value_tok = ts.next()
        value = parse_rational(value_tok)
        ts.expect_end()
        stmt = CauseStmt(
            target.text, tuple(condition), value, head.line, head.column, value_tok.column
        )
        return ("cause", stmt, head)
    ts.fail("expected 'outcomes', 'event' or 'cause'")


def parse_model(text: str) -> ModelAST:
    """Parse ``.csp`` source into a :class:`ModelAST`.

    Raises :class:`SourceError` for syntax errors, duplicate declarations,
    unknown names, a missing ``outcomes`` line and out-of-range outcomes, in
    that order of precedence.
    """
    outcomes = None
    outcomes_line = 1
    events: list[EventDecl] = []
    causes: list[CauseStmt] = []
    seen: dict[str, EventDecl] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = tokenize(line, lineno)
        if tokens[0].kind == "end":
            continue
        kind, item, head = _parse_line(tokens)
        if kind == "outcomes":
            if outcomes is not None:
                raise SourceError("parse", "duplicate outcomes declaration", head.line, head.column)
            outcomes, outcomes_line = item, head.line
        elif kind == "event":
            if item.name in seen:
                raise SourceError(
                    "resolve", f"duplicate event name {item.name!r}", item.line, item.column
                )
            seen[item.name] = item
            events.append(item)
        else:
            causes.append(item)

    for stmt in causes:
        if stmt.event not in seen:
            raise SourceError("resolve", f"unknown name {stmt.event}", stmt.line, stmt.column)
        for lit in stmt.condition:
            if lit.name not in seen:
                raise SourceError("resolve", f"unknown name {lit.name}", lit.line, lit.column)
    if outcomes is None:
        raise SourceError("parse", "missing outcomes declaration", 1, 1)
    if outcomes < 1:
        raise SourceError("validate", "a model needs at least one outcome", outcomes_line, 1)
    for decl in events:
        bad = [i for i in decl.members if i >= outcomes]
        if bad:
            raise SourceError(
                "validate",
                f"event {decl.name} mentions outcome {bad[0]} but only {outcomes} are declared",
                decl.line,
                decl.column,
            )
    return ModelAST(outcomes, tuple(events), tuple(causes), outcomes_line)


def format_rational(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def render_model(ast: ModelAST) -> str:
    lines = [f"outcomes {ast.outcomes}"]
    for e in ast.events:
        lines.append(f"event {e.name} = {{{', '.join(map(str, e.members))}}}")
    for c in ast.causes:
        cond = " & ".join(map(str, c.condition)) if c.condition else "*"
        lines.append(f"cause P({c.event} | {cond}) = {format_rational(c.value)}")
    return "\n".join(lines) + "\n"


def elaborate(
    ast: ModelAST,
    max_outcomes: int = DEFAULT_MAX_OUTCOMES,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> CausalSpace:
    """Build and validate the causal space described by ``ast``.

    Engine errors come back as :class:`SourceError` (kind ``validate``)
    pointing at the statement responsible, with the original exception in
    ``.error``.
    """
    names = ast.names

    def fail(err: CausalSpaceError, line: int, column: int):
        raise SourceError(
            "validate", f"{type(err).__name__}: {err}", line, column, error=err
        ) from err

    try:
        universe = Universe.checked(ast.outcomes, max_outcomes)
    except CausalSpaceError as err:
        fail(err, ast.outcomes_line, 1)
    if not ast.events:
        raise SourceError("validate", "a model needs at least one event", ast.outcomes_line, 1)
    events = [Event.of(universe, d.members) for d in ast.events]
    try:
        seq = validate_primitive_sequence(universe, events, max_events)
    except CausalSpaceError as err:
        level = getattr(err, "level", 1)
        decl = ast.events[min(level, len(ast.events)) - 1]
        fail(err, decl.line, decl.column)

    entries = []
    where = {}
    for stmt in ast.causes:
        level = names[stmt.event]
        cond = universe.full
        for lit in stmt.condition:
            if names[lit.name] >= level:
                raise StaleCondition(
                    f"condition on {lit.name} in a statement about {stmt.event}; "
                    "conditions may only mention earlier events",
                    lit.line,
                    lit.column,
                )
            e = events[names[lit.name] - 1]
            cond = cond & (e if lit.positive else ~e)
        if not cond:
            raise SourceError(
                "validate", f"condition for {stmt.event} is unsatisfiable", stmt.line, stmt.column
            )
        if not seq.is_atom(level - 1, cond):
            matches = [a for a in seq.atoms[level - 1] if a <= cond]
            raise AmbiguousCondition(
                f"condition for {stmt.event} covers {len(matches)} atoms {matches}; "
                "add literals until it names a single one",
                stmt.line,
                stmt.column,
            )
        index = seq.atom_index(level - 1, cond)
        try:
            check_entry(seq, level, index, stmt.value)
        except CausalSpaceError as err:
            fail(err, stmt.line, stmt.value_column)
        if (level, index) in where:
            first = where[(level, index)]
            raise SourceError(
                "validate",
                f"DuplicateEntry: {stmt.event} given {cond} was already set on line {first.line}",
                stmt.line,
                stmt.column,
            )
        where[(level, index)] = stmt
        entries.append((level, index, stmt.value))

    try:
        return build_causal_space(seq, entries)
    except MissingEntry as err:
        decl = ast.events[err.level - 1]
        fail(err, decl.line, decl.column)


def atom_literals(space: CausalSpace, names: Mapping[str, int], level: int, index: int) -> list[str]:
    """Literal path naming atom ``index`` of ``atoms[level]``."""
    by_level = {n: name for name, n in names.items()}
    atom = space.atoms[level][index]
    return [
        by_level[j] if atom <= space.sequence.events[j - 1] else "~" + by_level[j]
        for j in range(1, level + 1)
    ]


def space_to_ast(space: CausalSpace, names: Mapping[str, int]) -> ModelAST:
    """Canonical AST for ``space``: one cause line per unresolved pair."""
    by_level = {n: name for name, n in names.items()}
    events = tuple(
        EventDecl(by_level[n], tuple(e)) for n, e in enumerate(space.sequence.events, start=1)
    )
    causes = []
    for level, values in enumerate(space.table.levels, start=1):
        for index, p in values.items():
            lits = atom_literals(space, names, level - 1, index)
            cond = tuple(
                CondLiteral(s.lstrip("~"), not s.startswith("~")) for s in lits
            )
            causes.append(CauseStmt(by_level[level], cond, p))
    return ModelAST(space.universe.size, events, tuple(causes))


def export_text(space: CausalSpace, names: Mapping[str, int]) -> str:
    return render_model(space_to_ast(space, names))


def export_json(space: CausalSpace, names: Mapping[str, int]) -> str:
    by_level = {n: name for name, n in names.items()}
    doc = {
        "outcomes": space.universe.size,
        "events": [
            {"name": by_level[n], "members": list(e)}
            for n, e in enumerate(space.sequence.events, start=1)
        ],
        "cause": [
            {
                "level": level,
                "atom_literals": atom_literals(space, names, level - 1, index),
                "p": format_rational(p),
            }
            for level, values in enumerate(space.table.levels, start=1)
            for index, p in values.items()
        ],
        "atoms_per_level": [len(a) for a in space.atoms],
    }
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text: str) -> ModelAST:
    """Inverse of :func:`export_json`, for round-trip checks."""
    doc = json.loads(text)
    events = tuple(EventDecl(e["name"], tuple(e["members"])) for e in doc["events"])
    names = [e.name for e in events]
    causes = tuple(
        CauseStmt(
            names[c["level"] - 1],
            tuple(CondLiteral(s.lstrip("~"), not s.startswith("~")) for s in c["atom_literals"]),
            Fraction(c["p"]),
        )
        for c in doc["cause"]
    )
    return ModelAST(doc["outcomes"], events, causes)


@dataclass(frozen=True)
class Model:
    """An elaborated space together with its source names."""

    space: CausalSpace
    names: Mapping[str, int]
    ast: ModelAST

    @classmethod
    def from_text(cls, text: str, **limits) -> "Model":
        ast = parse_model(text)
        return cls(elaborate(ast, **limits), ast.names, ast)

    def event(self, name: str) -> Event:
        return self.space.sequence.events[self.names[name] - 1]

    def to_text(self) -> str:
        return export_text(self.space, self.names)

    def to_json(self) -> str:
        return export_json(self.space, self.names)
