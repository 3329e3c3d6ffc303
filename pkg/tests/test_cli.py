"""Tests for the command-line interface."""

import io
import json
import tempfile
from pathlib import Path

from src.cli import JsonReport, build_parser, run
from src.verify import SuiteReport, SuiteRow

PAIR = ["--ring", "Q[x,y]", "--mod", "y^2-x^8", "--ideal", "x^6, x^2 y"]


def invoke(*argv):
    out = io.StringIO()
    status = run(list(argv), stdout=out)
    return status, out.getvalue()


def invoke_json(*argv):
    status, text = invoke(*argv, "--json")
    return status, json.loads(text)


class TestJsonReport:
    """Tests for report rendering."""

    def test_key_order(self):
        """JSON keys should come in a fixed order."""
        report = JsonReport("coeffs", "Q[x]", {"ideal": ["x"]}, {"e": ["1", "0"]})
        assert list(json.loads(report.to_json())) == ["command", "ring", "inputs", "results", "timing"]

    def test_text(self):
        """Text output should flatten nested values."""
        report = JsonReport("delta", None, {"curve": "x*y"}, {"agree": True, "tree": {"children": []}})
        lines = report.to_text().splitlines()
        assert lines[0].split() == ["command", "delta"]
        assert ["agree", "true"] in [line.split() for line in lines]


class TestParser:
    """Tests for argument parsing."""

    def test_session_takes_file(self):
        """session should take a positional file."""
        args = build_parser().parse_args(["session", "notes.hs", "-vv"])
        assert args.file == "notes.hs"
        assert args.verbose == 2

    def test_unknown_command(self):
        """Unknown commands should exit with status 2."""
        assert invoke("frobnicate")[0] == 2


class TestCommands:
    """Tests for successful commands."""

    def test_coeffs(self):
        """coeffs should report e, a and the ring."""
        status, data = invoke_json("coeffs", *PAIR)
        assert status == 0
        assert data["command"] == "coeffs"
        assert data["ring"] == "Q[x,y]/(-x^8 + y^2)"
        assert data["inputs"] == {"mod": "-x^8 + y^2", "ideal": ["x^6", "x^2*y"]}
        assert data["results"]["e"] == ["12", "4"]
        assert data["results"]["a"] == ["8", "4"]
        assert data["timing"] is None

    def test_coeffs_text(self):
        """Text output should list the coefficients on one line."""
        status, text = invoke("coeffs", *PAIR)
        assert status == 0
        assert ["e", "12", "4"] in [line.split() for line in text.splitlines()]

    def test_timing(self):
        """--timing should add the command's wall time."""
        _, data = invoke_json("coeffs", *PAIR, "--timing")
        assert "coeffs" in data["timing"]
        assert data["timing"]["coeffs"]["count"] == "1"
        assert set(data["timing"]["coeffs"]) == {"count", "total_ms", "min_ms", "max_ms"}

    def test_hvector(self):
        """hvector should report s and a."""
        _, data = invoke_json("hvector", "--ring", "Q[x,y]", "--ideal", "m^2")
        assert data["results"] == {"d": "2", "s": "1", "a": ["3", "1"]}

    def test_hilbert_values(self):
        """hilbert-values should list h(0..n)."""
        _, data = invoke_json("hilbert-values", "--ring", "Q[x,y]", "--ideal", "m", "--n-max", "3")
        assert data["results"]["values"] == ["1", "3", "6", "10"]

    def test_prime_field(self):
        """--field should apply to a ring without prefix."""
        _, data = invoke_json("coeffs", "--ring", "[x,y]", "--field", "fp:7", "--ideal", "x, y")
        assert data["ring"] == "F7[x,y]"
        assert data["results"]["e"] == ["1", "0", "0"]

    def test_check_hhc(self):
        """check-hhc should report both readings of clause (i)."""
        _, data = invoke_json("check-hhc", "--ring", "Q[x,y]", "--ideal", "m^2")
        assert data["results"]["clause_i"]["printed"]["holds"] is False
        assert data["results"]["clause_i"]["mu"]["holds"] is True

    def test_check_powers(self):
        """check-powers should tabulate e(I^n)."""
        _, data = invoke_json("check-powers", "--ring", "Q[x,y]", "--ideal", "x, y", "--powers", "2")
        assert data["results"]["table"] == [["1", "0", "0"], ["4", "1", "0"]]

    def test_curve_resolve(self):
        """curve-resolve should list multiplicities."""
        _, data = invoke_json("curve-resolve", "--curve", "y^2 - x^5")
        assert data["results"]["multiplicities"] == ["2", "2", "1"]

    def test_delta(self):
        """delta should agree by both routes."""
        _, data = invoke_json("delta", "--curve", "y^2-x^8")
        assert data["ring"] == "Q[x,y]/(-x^8 + y^2)"
        assert data["results"]["delta"] == "4"
        assert data["results"]["agree"] is True

    def test_hironaka(self):
        """hironaka should flag e_1 = delta."""
        _, data = invoke_json("hironaka", "--curve", "y^2-x^8", "--ideal", "x^6, x^2*y")
        assert data["results"] == {"e0": "12", "e1": "4", "delta": "4", "hironaka": True}

    def test_session(self):
        """session should run every command of the file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "node.hs"
            path.write_text("ring Q[x,y]\nmod x*y\nideal M = x, y\ncurve x*y\ncoeffs M\ndelta\n")
            status, data = invoke_json("session", str(path))
        assert status == 0
        assert [entry["command"] for entry in data["results"]] == ["coeffs", "delta"]
        assert data["results"][0]["results"]["e"] == ["2", "1"]
        assert data["results"][1]["results"]["delta"] == "1"


class TestExitCodes:
    """Tests for error classification at the command line."""

    def test_parse_error(self, capsys):
        """Malformed input should exit 2 with a message on stderr."""
        status, _ = invoke("coeffs", "--ring", "Q[x,y]", "--ideal", "x^6 +")
        assert status == 2
        assert capsys.readouterr().err.startswith("error: ")

    def test_missing_ideal(self):
        """A missing --ideal should be a parse error."""
        assert invoke("coeffs", "--ring", "Q[x,y]")[0] == 2

    def test_not_primary(self):
        """A non-primary ideal should exit 3."""
        assert invoke("coeffs", "--ring", "Q[x,y]", "--ideal", "x")[0] == 3

    def test_not_stabilized(self):
        """A tiny cap should exit 4."""
        assert invoke("coeffs", "--ring", "Q[x,y]", "--ideal", "m", "--max-power", "2")[0] == 4

    def test_rationality(self):
        """A repeated irrational tangent should exit 5."""
        assert invoke("curve-resolve", "--curve", "(x^2 + y^2)^2 + x^5")[0] == 5

    def test_json_error_report(self):
        """--json should also report errors."""
        status, data = invoke_json("coeffs", "--ring", "Q[x,y]", "--ideal", "x")
        assert status == 3
        assert data["results"]["error"]["type"] == "precondition"
        assert data["results"]["error"]["exit_code"] == "3"
        assert data["results"]["error"]["severity"] == "warning"

    def test_timeout(self):
        """A spent wall clock budget should exit 4."""
        status, data = invoke_json(
            "check-powers", "--ring", "Q[x,y,z]", "--ideal", "m^2", "--timeout-secs", "1e-9"
        )
        assert status == 4
        assert data["results"]["error"]["type"] == "resource"

    def test_suite_mismatch(self, monkeypatch):
        """A mismatching reference row should exit 1."""
        failing = SuiteReport([SuiteRow("k", {"e": "1"}, {"e": "2"})])
        monkeypatch.setattr("src.cli.run_reference_suite", lambda *args: failing)
        status, data = invoke_json("verify-paper", "--skip-slow")
        assert status == 1
        assert data["results"]["passed"] is False
