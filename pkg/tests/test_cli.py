import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from causalspace.cli import ExitStatus, main, render_number
from causalspace.dsl import Model

FIXTURES = Path(__file__).parent / "fixtures"
RX = str(FIXTURES / "rx.csp")
RZ = str(FIXTURES / "rz.csp")


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


class TestCheck:
    def test_ok(self):
        code, out, _ = call("check", RX)
        assert code == 0
        assert out == "OK: 4 outcomes, 2 events, atoms per level 1/2/4\n"

    @pytest.mark.parametrize(
        "name, kind",
        [
            ("missing-entry", "MissingEntry"),
            ("novelty", "NoveltyViolation"),
            ("out-of-range", "OutOfRange"),
            ("contradicts", "ContradictsTruth"),
            ("ambiguous", "AmbiguousCondition"),
            ("stale", "StaleCondition"),
            ("duplicate-entry", "DuplicateEntry"),
            ("too-big", "UniverseTooLarge"),
            ("syntax", "parse error"),
            ("bad-rational", "parse error"),
            ("unknown-name", "resolve error"),
            ("duplicate-name", "resolve error"),
            ("outcome-range", "validate error"),
        ],
    )
    def test_model_errors_exit_2(self, name, kind):
        path = str(FIXTURES / f"{name}.csp")
        code, out, err = call("check", path)
        assert code == ExitStatus.MODEL_ERROR == 2
        assert out == ""
        assert err.startswith(f"{path}: line ") and kind in err

    def test_missing_file(self, tmp_path):
        code, _, err = call("check", str(tmp_path / "nope.csp"))
        assert code == 2 and "cannot read" in err

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("CAUSALSPACE_MAX_OUTCOMES", "3")
        assert call("check", RX)[0] == 2
        monkeypatch.setenv("CAUSALSPACE_MAX_OUTCOMES", "5000")
        assert call("check", str(FIXTURES / "too-big.csp"))[0] == 0
        # the flag wins over the environment
        assert call("check", RX, "--max-outcomes", "2")[0] == 2
        monkeypatch.setenv("CAUSALSPACE_MAX_OUTCOMES", "lots")
        assert call("check", RX)[0] == 3


class TestQuery:
    def test_text(self):
        code, out, _ = call("query", RX, "belief E1 | E2", "belief E1 | do(E2)", "truth E1 | E1 & E2")
        assert code == 0
        assert out.splitlines() == [
            "belief E1 | E2 => 4/7 (~0.571429)",
            "belief E1 | do(E2) => 1/2 (0.5)",
            "truth E1 | E1 & E2 => True",
        ]

    def test_posterior_and_render_modes(self):
        _, out, _ = call("query", RX, "bayes E1, ~E1 given E2", "--render", "exact")
        assert out == "bayes E1, ~E1 given E2 => [4/7, 3/7]\n"
        _, out, _ = call("query", RX, "belief E1 | E2", "--render", "float", "--precision", "3")
        assert out == "belief E1 | E2 => 0.571\n"

    def test_json(self):
        code, out, _ = call("query", RX, "--format", "json", "belief E1 | E2", "belief E1 | {}")
        assert code == 1
        first, second = map(json.loads, out.splitlines())
        assert first["query"] == "belief E1 | E2"
        assert first["exact"] == "4/7"
        assert first["float"] == pytest.approx(4 / 7, abs=1e-15)
        assert "error" in second

    def test_json_is_deterministic(self):
        argv = ("query", RX, "--format", "json", "bayes E1, ~E1 given E2", "truth E2 | E1")
        assert call(*argv)[1] == call(*argv)[1]

    def test_query_error_exit_1(self):
        code, out, _ = call("query", RZ, "belief E1 | E2", "bayes E2, ~E2 given E1")
        assert code == 1
        lines = out.splitlines()
        assert lines[0].startswith("belief E1 | E2 => ")
        assert "error" in lines[1] and "ZeroEvidence" in lines[1]

    def test_parse_error_in_query_exit_1(self):
        code, out, _ = call("query", RX, "belief E1 |")
        assert code == 1 and "parse error" in out

    def test_query_file(self):
        code, out, _ = call("query", RX, "--queries", str(FIXTURES / "queries.txt"))
        assert code == 0
        assert out.splitlines() == [
            "belief E1 | E2 => 4/7 (~0.571429)",
            "belief E1 | do(E2) => 1/2 (0.5)",
            "truth E1 | E1 => True",
        ]

    @pytest.mark.parametrize(
        "argv",
        [
            (),
            ("frob", RX),
            ("query", RX),
            ("check", RX, "belief E1"),
            ("query", RX, "belief E1", "--format", "xml"),
            ("query", RX, "belief E1", "--precision", "0"),
            ("query", RX, "--queries", "/nonexistent/queries.txt"),
        ],
    )
    def test_usage_errors_exit_3(self, argv):
        code, out, err = call(*argv)
        assert code == ExitStatus.USAGE_ERROR == 3
        assert out == "" and "usage" in err


class TestRepl:
    def test_session(self):
        script = "belief E1 | E2\n\n# comment\n:model\nbelief E9\n:nope\nbelief E1 | do(E2)\n:quit\nbelief E1\n"
        code, out, _ = call("repl", RX, stdin=script)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "4/7 (~0.571429)"
        assert "outcomes 4" in out
        assert any(line.startswith("error:") and "E9" in line for line in lines)
        assert any("unknown command :nope" in line for line in lines)
        assert lines[-1] == "1/2 (0.5)"

    def test_eof_ends_cleanly(self):
        assert call("repl", RX, stdin="belief E1")[0] == 0

    def test_garbage_never_escapes(self):
        junk = "\n".join(["~~~", "belief (", "bayes given", "truth {99} | E1", "belief E1 | do(E1, ~E1)", "\x00"])
        code, out, _ = call("repl", RX, stdin=junk + "\n")
        assert code == 0
        assert [line.startswith("error:") for line in out.splitlines()] == [True] * 6


class TestExport:
    def test_text_round_trip(self):
        code, out, _ = call("export", RX)
        assert code == 0
        assert Model.from_text(out).space == Model.from_text((FIXTURES / "rx.csp").read_text()).space

    def test_json(self):
        _, out, _ = call("export", RX, "--format", "json")
        doc = json.loads(out)
        assert doc["outcomes"] == 4
        assert doc["atoms_per_level"] == [1, 2, 4]
        assert [e["name"] for e in doc["events"]] == ["E1", "E2"]


def test_render_number():
    assert render_number(F(4, 7)) == "4/7 (~0.571429)"
    assert render_number(F(1, 2)) == "1/2 (0.5)"
    assert render_number(F(1)) == "1/1 (1)"
    assert render_number(F(1, 3), "exact") == "1/3"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "causalspace", "query", RX, "belief E1 | E2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "belief E1 | E2 => 4/7 (~0.571429)\n"
