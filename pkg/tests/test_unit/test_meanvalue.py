"""Unit tests for mean-value witnesses and L'Hopital limits."""

import math

import pytest

from epscalc.analysis.meanvalue import (
    cmvt_witness,
    find_critical,
    lhopital_00,
    lhopital_general,
    mvt_witness,
)
from epscalc.core.jet import jet_const
from epscalc.errors import BaseMismatchError, CertificationError, DomainError, PreconditionError
from epscalc.expr import ExprEvaluator, eval_jet, parse

GRID = {"points": 513, "depth": 30}


def expr_pair(src):
    e = parse(src)
    return ExprEvaluator(e), (lambda x: eval_jet(e, x))


class TestWitnesses:
    """Critical point, mean value and Cauchy mean value searches."""

    def test_sin_critical_point(self):
        f, fj = expr_pair("sin(x)")
        w = find_critical(f, fj, 0.0, math.pi, tol=1e-8)
        assert w.passed
        assert w.c == pytest.approx(math.pi / 2.0, abs=1e-6)
        assert w.to_dict()["op"] == "critical"

    def test_mvt_cubic(self):
        f, fj = expr_pair("x^3")
        w = mvt_witness(f, fj, 0.0, 2.0, tol=1e-8)
        assert w.passed
        assert w.c == pytest.approx(2.0 / math.sqrt(3.0), abs=1e-6)

    def test_cmvt(self):
        f, fj = expr_pair("x^2")
        g, gj = expr_pair("x^3")
        w = cmvt_witness(f, g, fj, gj, 1.0, 2.0, tol=1e-8)
        assert w.passed
        assert w.c == pytest.approx(14.0 / 9.0, abs=1e-6)

    def test_monotone_function_has_boundary_extrema(self):
        f, fj = expr_pair("exp(x)")
        w = find_critical(f, fj, 0.0, 1.0)
        assert not w.found
        assert not w.passed
        assert w.residual == math.inf

    def test_constant_function(self):
        w = find_critical(lambda x: 2.0, lambda x: jet_const(2.0, x), 0.0, 1.0)
        assert w.passed
        assert 0.0 < w.c < 1.0
        assert w.residual == 0.0

    def test_cmvt_needs_monotone_g(self):
        f, fj = expr_pair("x")
        g, gj = expr_pair("x^2")
        with pytest.raises(PreconditionError):
            cmvt_witness(f, g, fj, gj, -1.0, 1.0)

    def test_empty_interval(self):
        f, fj = expr_pair("x^2")
        with pytest.raises(DomainError):
            find_critical(f, fj, 1.0, 1.0)


class TestLhopitalZeroZero:
    """Limits from two jets with vanishing values."""

    def test_sinc_at_zero(self):
        f, fj = expr_pair("sin(x)")
        g, gj = expr_pair("x")
        verdict = lhopital_00(fj(0.0), gj(0.0), f, g, **GRID)
        assert verdict.passed
        assert verdict.limit == pytest.approx(1.0, abs=1e-12)
        assert verdict.to_dict()["case"] == "zero_zero"

    def test_jets_only(self):
        _, fj = expr_pair("exp(x) - 1")
        _, gj = expr_pair("2*x")
        verdict = lhopital_00(fj(0.0), gj(0.0))
        assert verdict.passed
        assert verdict.limit == pytest.approx(0.5, rel=1e-12)
        assert verdict.env is not None

    def test_nonzero_value_rejected(self):
        _, fj = expr_pair("cos(x)")
        _, gj = expr_pair("x")
        with pytest.raises(PreconditionError):
            lhopital_00(fj(0.0), gj(0.0))

    def test_flat_denominator_rejected(self):
        _, fj = expr_pair("sin(x)")
        _, gj = expr_pair("x^2")
        with pytest.raises(PreconditionError):
            lhopital_00(fj(0.0), gj(0.0))

    def test_base_mismatch(self):
        _, fj = expr_pair("sin(x)")
        _, gj = expr_pair("x")
        with pytest.raises(BaseMismatchError):
            lhopital_00(fj(0.0), gj(0.1))


class TestLhopitalGeneral:
    """Sampled one-sided limits against a claim."""

    @pytest.mark.parametrize("side", [1, -1])
    def test_sinc_both_sides(self, side):
        f, fj = expr_pair("sin(x)")
        g, gj = expr_pair("x")
        verdict = lhopital_general(f, g, 0.0, side, 1.0, fj, gj, **GRID)
        assert verdict.passed
        assert verdict.case == "zero_zero"
        assert verdict.to_dict()["side"] == ("right" if side > 0 else "left")

    def test_wrong_claim_fails(self):
        f, _ = expr_pair("sin(x)")
        g, _ = expr_pair("x")
        verdict = lhopital_general(f, g, 0.0, 1, 2.0, **GRID)
        assert not verdict.passed
        assert verdict.witness_eps is not None

    def test_log_over_reciprocal(self):
        f, fj = expr_pair("ln(x)")
        g, gj = expr_pair("1/x")
        verdict = lhopital_general(f, g, 0.0, 1, 0.0, fj, gj, **GRID)
        assert verdict.passed
        assert verdict.case == "unbounded"
        fit = verdict.derivative_fit
        assert fit is not None
        assert fit.fitted_coeff == pytest.approx(1.0, abs=0.1)
        assert fit.fitted_power == pytest.approx(1.0, abs=0.1)

    def test_no_indeterminate_form(self):
        f, _ = expr_pair("1 + x")
        g, _ = expr_pair("2 + x")
        with pytest.raises(PreconditionError):
            lhopital_general(f, g, 0.0, 1, 0.5, **GRID)

    def test_denominator_vanishes_at_sample(self):
        f, _ = expr_pair("x")
        g, _ = expr_pair("x - 0.25")
        with pytest.raises(CertificationError):
            lhopital_general(f, g, 0.0, 1, 0.0, **GRID)

    def test_bad_side(self):
        f, _ = expr_pair("sin(x)")
        with pytest.raises(DomainError):
            lhopital_general(f, f, 0.0, 0, 1.0)
