"""Command-line front end.

    causalspace check  MODEL
    causalspace query  MODEL [QUERY ...] [--queries FILE] [--format text|json]
    causalspace repl   MODEL
    causalspace export MODEL [--format text|json]

Exit codes: 0 success, 1 a query failed, 2 the model is unreadable or
invalid, 3 bad usage.
"""

from __future__ import annotations

import argparse
import enum
import json
import os
import sys
from fractions import Fraction

from .causal import DEFAULT_MAX_EVENTS
from .dsl.model import Model, format_rational
from .dsl.query import QueryResult, eval_query, parse_query
from .errors import CausalSpaceError
from .events import DEFAULT_MAX_OUTCOMES

MAX_OUTCOMES_ENV = "CAUSALSPACE_MAX_OUTCOMES"


class ExitStatus(enum.IntEnum):
    OK = 0
    QUERY_ERROR = 1
    MODEL_ERROR = 2
    USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="causalspace", description="Exact queries on finite causal spaces.")
    parser.add_argument("command", choices=["check", "query", "repl", "export"])
    parser.add_argument("model", help="path to a .csp model file")
    parser.add_argument("queries", nargs="*", metavar="QUERY")
    parser.add_argument("--queries", dest="query_file", metavar="FILE",
                        help="read queries from FILE, one per line; '#' starts a comment")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--render", choices=["exact", "float", "both"], default="both")
    parser.add_argument("--precision", type=int, default=6, metavar="K",
                        help="significant digits for float rendering (default 6)")
    parser.add_argument("--max-outcomes", type=int, default=None)
    parser.add_argument("--max-events", type=int, default=DEFAULT_MAX_EVENTS)
    return parser


def render_number(p: Fraction, render: str = "both", precision: int = 6) -> str:
    approx = f"{float(p):.{precision}g}"
    if render == "exact":
        return format_rational(p)
    if render == "float":
        return approx
    mark = "" if Fraction(approx) == p else "~"
    return f"{format_rational(p)} ({mark}{approx})"


def render_result(result: QueryResult, render: str = "both", precision: int = 6) -> str:
    if result.kind == "truth":
        return str(result.value)
    if result.kind == "posterior":
        return "[" + ", ".join(render_number(p, render, precision) for p in result.value) + "]"
    return render_number(result.value, render, precision)


def result_json(query: str, result: QueryResult | None, error: Exception | None) -> dict:
    doc = {"query": query, "kind": None, "exact": None, "float": None, "error": None}
    if error is not None:
        doc["error"] = f"{type(error).__name__}: {error}"
        return doc
    doc["kind"] = result.kind
    if result.kind == "truth":
        doc["exact"] = str(result.value)
    elif result.kind == "posterior":
        doc["exact"] = [format_rational(p) for p in result.value]
        doc["float"] = [float(p) for p in result.value]
    else:
        doc["exact"] = format_rational(result.value)
        doc["float"] = float(result.value)
    return doc


def run_query(model: Model, text: str) -> QueryResult:
    return eval_query(model.space, model.names, parse_query(text))


def load_model(path: str, max_outcomes: int, max_events: int) -> Model:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return Model.from_text(text, max_outcomes=max_outcomes, max_events=max_events)


def read_query_file(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        lines = [line.split("#", 1)[0].strip() for line in fh]
    return [line for line in lines if line]


def cmd_check(model: Model, out) -> ExitStatus:
    space = model.space
    per_level = "/".join(str(len(a)) for a in space.atoms)
    print(
        f"OK: {space.universe.size} outcomes, {space.depth} events, atoms per level {per_level}",
        file=out,
    )
    return ExitStatus.OK


def cmd_query(model: Model, queries, fmt: str, render: str, precision: int, out) -> ExitStatus:
    status = ExitStatus.OK
    for text in queries:
        try:
            result, error = run_query(model, text), None
        except CausalSpaceError as err:
            result, error = None, err
            status = ExitStatus.QUERY_ERROR
        if fmt == "json":
            print(json.dumps(result_json(text, result, error)), file=out)
        elif error is not None:
            print(f"{text} => error: {error}", file=out)
        else:
            print(f"{text} => {render_result(result, render, precision)}", file=out)
    return status


def cmd_repl(model: Model, inp, out, render: str = "both", precision: int = 6) -> ExitStatus:
    interactive = hasattr(inp, "isatty") and inp.isatty()
    while True:
        if interactive:
            print("> ", end="", file=out, flush=True)
        line = inp.readline()
        if not line:
            return ExitStatus.OK
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == ":quit":
            return ExitStatus.OK
        if line == ":model":
            print(model.to_text(), end="", file=out)
            continue
        if line.startswith(":"):
            print(f"error: unknown command {line} (try :model or :quit)", file=out)
            continue
        try:
            print(render_result(run_query(model, line), render, precision), file=out)
        except CausalSpaceError as err:
            print(f"error: {err}", file=out)


def cmd_export(model: Model, fmt: str, out) -> ExitStatus:
    out.write(model.to_json() if fmt == "json" else model.to_text())
    return ExitStatus.OK


def _max_outcomes(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(MAX_OUTCOMES_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{MAX_OUTCOMES_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_MAX_OUTCOMES


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
        max_outcomes = _max_outcomes(args.max_outcomes)
        queries = list(args.queries)
        if args.command != "query" and queries:
            raise UsageError(f"{args.command} takes no queries")
        if args.query_file:
            try:
                queries += read_query_file(args.query_file)
            except OSError as err:
                raise UsageError(f"cannot read query file: {err}") from None
        if args.command == "query" and not queries:
            raise UsageError("query needs at least one QUERY or --queries FILE")
        if args.precision < 1:
            raise UsageError("--precision must be at least 1")
    except UsageError as err:
        print(f"usage error: {err}", file=stderr)
        parser.print_usage(stderr)
        return ExitStatus.USAGE_ERROR

    try:
        model = load_model(args.model, max_outcomes, args.max_events)
    except OSError as err:
        print(f"error: cannot read {args.model}: {err.strerror or err}", file=stderr)
        return ExitStatus.MODEL_ERROR
    except CausalSpaceError as err:
        print(f"{args.model}: {err}", file=stderr)
        return ExitStatus.MODEL_ERROR

    if args.command == "check":
        return cmd_check(model, stdout)
    if args.command == "query":
        return cmd_query(model, queries, args.format, args.render, args.precision, stdout)
    if args.command == "repl":
        return cmd_repl(model, stdin, stdout, args.render, args.precision)
    return cmd_export(model, args.format, stdout)


if __name__ == "__main__":
    sys.exit(main())
