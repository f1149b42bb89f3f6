"""End-to-end tests for the command-line entry point."""

import io
import json
import math

import pytest

from epscalc.app import run

pytestmark = pytest.mark.integration


def invoke(*argv):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err, environ={})
    return code, out.getvalue(), err.getvalue()


class TestCommands:
    """One command per test, JSON output unless noted."""

    def test_jet_json(self):
        code, out, _ = invoke("jet", "x^2", "--at", "3", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["value"] == 9
        assert data["slope"] == 6
        assert data["expr"] == "x^2"

    def test_eval_text(self):
        code, out, _ = invoke("eval", "sin(x)", "--at", "0.5")
        assert code == 0
        assert "VALUE" in out
        assert "value:" in out

    def test_funnel_boxes_nest(self):
        code, out, _ = invoke(
            "funnel", "sin(x)-x", "--at", "0", "--format", "json", "--profile", "fast"
        )
        assert code == 0
        boxes = json.loads(out)["boxes"]
        assert len(boxes) == 8
        for outer, inner in zip(boxes, boxes[1:]):
            assert inner["y_hi"] <= outer["y_hi"]
            assert inner["x_hi"] <= outer["x_hi"]

    def test_funnel_csv(self):
        code, out, _ = invoke(
            "funnel", "x^2", "--at", "1", "--boxes", "3", "--format", "csv", "--profile", "fast"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "box,x_lo,x_hi,y_lo,y_hi"
        assert len(lines) == 4

    def test_integrate_log(self):
        code, out, _ = invoke(
            "integrate", "1/x", "--from", "1", "--to", "2", "--width", "1e-4",
            "--format", "json", "--profile", "fast",
        )
        assert code == 0
        data = json.loads(out)
        assert data["lo"] <= math.log(2.0) <= data["hi"]
        assert data["rigorous"] is True

    def test_lhopital_from_jets(self):
        code, out, _ = invoke(
            "lhopital", "sin(x)", "x", "--at", "0", "--format", "json", "--profile", "fast"
        )
        assert code == 0
        data = json.loads(out)
        assert data["pass"] is True
        assert data["verdicts"][0]["L"] == pytest.approx(1.0, abs=1e-9)

    def test_lhopital_wrong_claim_exits_one(self):
        code, out, _ = invoke(
            "lhopital", "sin(x)", "x", "--at", "0", "--claim", "2", "--side", "right",
            "--format", "json", "--profile", "fast",
        )
        assert code == 1
        assert json.loads(out)["pass"] is False

    def test_taylor_check(self):
        code, out, _ = invoke(
            "taylor", "exp(x)", "--at", "0", "--order", "3", "--check",
            "--format", "json", "--profile", "fast",
        )
        assert code == 0
        data = json.loads(out)
        assert data["peano"]["pass"] is True
        assert data["coeffs"][1] == pytest.approx(1.0, abs=1e-10)

    def test_out_file(self, tmp_path):
        target = tmp_path / "jet.json"
        code, out, _ = invoke("jet", "x^3", "--at", "2", "--format", "json", "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["slope"] == 12


class TestErrors:
    """Exit code 2 for usage and engine errors."""

    def test_unknown_flag(self):
        code, _, _ = invoke("jet", "x", "--at", "1", "--bogus")
        assert code == 2

    def test_missing_command(self):
        code, _, _ = invoke()
        assert code == 2

    def test_parse_error_message(self):
        code, out, err = invoke("jet", "sin(x", "--at", "1")
        assert code == 2
        assert out == ""
        assert "epscalc jet: error:" in err

    def test_domain_error(self):
        code, _, err = invoke("eval", "ln(x)", "--at", "-1")
        assert code == 2
        assert "ln(x)" in err

    def test_bad_environment_tolerance(self):
        out, err = io.StringIO(), io.StringIO()
        code = run(["jet", "x", "--at", "1"], stdout=out, stderr=err, environ={"EPSCALC_TOL": "x"})
        assert code == 2
        assert "EPSCALC_TOL" in err.getvalue()

    def test_unknown_profile(self):
        code, _, _ = invoke("jet", "x", "--at", "1", "--profile", "nope")
        assert code == 2


class TestVerify:
    """Verification suites through the CLI."""

    def test_envelope_suite(self):
        code, out, _ = invoke("verify", "envelope", "--profile", "fast")
        assert code == 0
        assert "Result: PASS" in out

    @pytest.mark.slow
    def test_hyperbolic_suite_json(self):
        code, out, _ = invoke("verify", "hyperbolic", "--profile", "fast", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["suite"] == "hyperbolic"
        assert data["pass"] is True
