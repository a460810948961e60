"""Query language.

::

    truth <expr> | <expr>
    belief <expr> [| <expr>]
    belief <expr> | do(<lit>, ...) [, <expr>]
    bayes <expr>, <expr>, ... given <expr> [; <expr> ...]

Expressions combine event names and outcome sets ``{0, 2}`` with ``~``,
``&`` and, inside parentheses only, ``|`` for union. Precedence is
``~`` > ``&`` > ``|``. A ``bayes`` query with several ``;``-separated data
events updates sequentially.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from ..belief import bayes_posterior, belief, belief_do, sequential_posterior
from ..causal import CausalSpace, Literal
from ..errors import CausalSpaceError, QueryError, SourceError
from ..events import Event, TruthValue, truth
from .lexer import TokenStream, tokenize


# -- expression AST ---------------------------------------------------------


@dataclass(frozen=True)
class Name:
    name: str
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class SetLit:
    members: tuple[int, ...]
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


Expr = Union[Name, SetLit, Not, And, Or]


@dataclass(frozen=True)
class DoLiteral:
    name: str
    positive: bool = True
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)


# -- query AST --------------------------------------------------------------


@dataclass(frozen=True)
class TruthQuery:
    target: Expr
    condition: Expr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class BeliefQuery:
    target: Expr
    condition: Expr | None = None
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class DoQuery:
    do: tuple[DoLiteral, ...]
    target: Expr
    given: Expr | None = None
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class BayesQuery:
    hypotheses: tuple[Expr, ...]
    data: Expr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class SeqBayesQuery:
    hypotheses: tuple[Expr, ...]
    data: tuple[Expr, ...]
    source: str = field(default="", compare=False)


QueryAST = Union[TruthQuery, BeliefQuery, DoQuery, BayesQuery, SeqBayesQuery]


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, ts: TokenStream):
        self.ts = ts

    def expr(self) -> Expr:
        """Top-level operand: no bare ``|``, which would clash with the condition bar."""
        return self.conjunction()

    def union(self) -> Expr:
        node = self.conjunction()
        while self.ts.accept("|"):
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Expr:
        node = self.unary()
        while self.ts.accept("&"):
            node = And(node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.ts.accept("~"):
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        ts = self.ts
        tok = ts.peek
        if ts.accept("("):
            node = self.union()
            ts.expect(")")
            return node
        if ts.at("{"):
            ts.next()
            members = []
            if not ts.accept("}"):
                while True:
                    members.append(int(ts.expect_int().text))
                    if ts.accept("}"):
                        break
                    ts.expect(",")
            return SetLit(tuple(sorted(set(members))), tok.line, tok.column)
        name = ts.expect_name("an event name, a set or '('")
        return Name(name.text, name.line, name.column)

    def do_literal(self) -> DoLiteral:
        neg = self.ts.accept("~")
        name = self.ts.expect_name("an event name")
        start = neg or name
        return DoLiteral(name.text, neg is None, start.line, start.column)


def parse_query(text: str) -> QueryAST:
    ts = TokenStream(tokenize(text.rstrip("\r\n")))
    p = _Parser(ts)
    if ts.accept("truth"):
        target = p.expr()
        ts.expect("|")
        cond = p.expr()
        ts.expect_end()
        return TruthQuery(target, cond, text)
    if ts.accept("belief"):
        target = p.expr()
        if not ts.accept("|"):
            ts.expect_end()
            return BeliefQuery(target, None, text)
        if ts.accept("do"):
            ts.expect("(")
            lits = [p.do_literal()]
            while ts.accept(","):
                lits.append(p.do_literal())
            ts.expect(")")
            given = p.expr() if ts.accept(",") else None
            ts.expect_end()
            return DoQuery(tuple(lits), target, given, text)
        cond = p.expr()
        ts.expect_end()
        return BeliefQuery(target, cond, text)
    if ts.accept("bayes"):
        hyps = [p.expr()]
        while ts.accept(","):
            hyps.append(p.expr())
        ts.expect("given")
        data = [p.expr()]
        while ts.accept(";"):
            data.append(p.expr())
        ts.expect_end()
        if len(data) == 1:
            return BayesQuery(tuple(hyps), data[0], text)
        return SeqBayesQuery(tuple(hyps), tuple(data), text)
    ts.fail("expected 'truth', 'belief' or 'bayes'")


def format_expr(node: Expr, top: bool = True) -> str:
    if isinstance(node, Name):
        return node.name
    if isinstance(node, SetLit):
        return "{" + ",".join(map(str, node.members)) + "}"
    if isinstance(node, Not):
        inner = format_expr(node.operand, top=False)
        if isinstance(node.operand, (And, Or)):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(node, And):
        parts = []
        for side in (node.left, node.right):
            s = format_expr(side, top=False)
            parts.append(f"({s})" if isinstance(side, Or) else s)
        return " & ".join(parts)
    s = f"{format_expr(node.left, top=False)} | {format_expr(node.right, top=False)}"
    return f"({s})" if top else s


# -- evaluation -------------------------------------------------------------


def eval_expr(space: CausalSpace, names: Mapping[str, int], node: Expr) -> Event:
    """Map an expression onto an event: ``&``, ``|`` and ``~`` become set operations."""
    u = space.universe
    if isinstance(node, Name):
        if node.name not in names:
            raise SourceError("resolve", f"unknown name {node.name}", node.line, node.column)
        return space.sequence.events[names[node.name] - 1]
    if isinstance(node, SetLit):
        bad = [i for i in node.members if i >= u.size]
        if bad:
            raise SourceError(
                "resolve",
                f"outcome {bad[0]} is outside a universe of {u.size} outcomes",
                node.line,
                node.column,
            )
        return Event.of(u, node.members)
    if isinstance(node, Not):
        return ~eval_expr(space, names, node.operand)
    if isinstance(node, And):
        return eval_expr(space, names, node.left) & eval_expr(space, names, node.right)
    if isinstance(node, Or):
        return eval_expr(space, names, node.left) | eval_expr(space, names, node.right)
    raise TypeError(f"not an expression: {node!r}")


def _literal(names: Mapping[str, int], lit: DoLiteral) -> Literal:
    if lit.name not in names:
        raise SourceError("resolve", f"unknown name {lit.name}", lit.line, lit.column)
    return Literal(names[lit.name], lit.positive)


@dataclass(frozen=True)
class QueryResult:
    """``kind`` is ``truth``, ``belief`` or ``posterior``."""

    kind: str
    value: Union[TruthValue, Fraction, tuple[Fraction, ...]]


def eval_query(space: CausalSpace, names: Mapping[str, int], q: QueryAST) -> QueryResult:
    """Run a parsed query. Engine failures are re-raised as :class:`QueryError`."""
    ev = lambda node: eval_expr(space, names, node)  # noqa: E731
    try:
        if isinstance(q, TruthQuery):
            return QueryResult("truth", truth(ev(q.target), ev(q.condition)))
        if isinstance(q, BeliefQuery):
            cond = None if q.condition is None else ev(q.condition)
            return QueryResult("belief", belief(space, ev(q.target), cond))
        if isinstance(q, DoQuery):
            lits = [_literal(names, lit) for lit in q.do]
            given = None if q.given is None else ev(q.given)
            return QueryResult("belief", belief_do(space, lits, ev(q.target), given))
        if isinstance(q, BayesQuery):
            post = bayes_posterior(space, [ev(h) for h in q.hypotheses], ev(q.data))
            return QueryResult("posterior", post.values)
        if isinstance(q, SeqBayesQuery):
            hyps = [ev(h) for h in q.hypotheses]
            post = sequential_posterior(space, hyps, [ev(d) for d in q.data])
            return QueryResult("posterior", post.values)
    except SourceError:
        raise
    except CausalSpaceError as err:
        raise QueryError(q.source.strip(), err) from err
    raise TypeError(f"not a query: {q!r}")
