"""Unit tests for bracketed integration and the FTC jet."""

import math

import pytest

from epscalc.analysis.integral import (
    IntegralBracket,
    ftc_grid,
    ftc_jet,
    integrate,
    monotone_breakpoints,
    verify_ftc,
)
from epscalc.core.jet import Jet1, continuity_jet0
from epscalc.errors import DomainError
from epscalc.expr import ExprEvaluator, parse


def recip(t):
    return 1.0 / t


class TestIntegrate:
    """Monotone-piece brackets."""

    def test_log_two(self):
        bracket = integrate(recip, 1.0, 2.0, 1e-4)
        assert bracket.contains(math.log(2.0))
        assert bracket.width <= 1e-4
        assert bracket.rigorous and bracket.converged

    def test_reversed_limits(self):
        bracket = integrate(recip, 2.0, 1.0, 1e-4)
        assert bracket.contains(-math.log(2.0))
        assert (bracket.a, bracket.b) == (2.0, 1.0)

    def test_empty_interval(self):
        bracket = integrate(recip, 1.5, 1.5)
        assert (bracket.lo, bracket.hi) == (0.0, 0.0)

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            integrate(recip, 1.0, math.inf)
        with pytest.raises(DomainError):
            integrate(recip, 1.0, 2.0, 0.0)

    def test_breakpoints_of_sine(self):
        breaks = monotone_breakpoints(math.sin, 0.0, 2.0 * math.pi)
        assert breaks == pytest.approx([math.pi / 2.0, 1.5 * math.pi], abs=1e-6)

    def test_non_monotone_integrand(self):
        bracket = integrate(math.sin, 0.0, math.pi, 1e-4)
        assert bracket.contains(2.0)
        assert bracket.rigorous

    def test_supplied_breakpoints(self):
        bracket = integrate(lambda x: (x - 1.0) ** 2, 0.0, 3.0, 1e-4, breakpoints=[1.0, 7.0])
        assert bracket.contains(3.0)

    def test_panel_cap_reports_not_converged(self):
        bracket = integrate(recip, 1.0, 2.0, 1e-9, max_panels=2**10)
        assert not bracket.converged
        assert bracket.contains(math.log(2.0))

    def test_many_turns_fall_back_to_sampling(self):
        bracket = integrate(math.sin, 0.0, 6.0 * math.pi, 1e-2, max_panels=2**16, max_segments=4)
        assert not bracket.rigorous
        assert bracket.converged
        assert bracket.contains(0.0)

    def test_to_dict(self):
        data = integrate(recip, 1.0, 2.0, 1e-3).to_dict()
        assert set(data) == {"a", "b", "lo", "hi", "n_panels", "rigorous", "converged"}

    def test_inverted_bracket_rejected(self):
        with pytest.raises(DomainError):
            IntegralBracket(1.0, 0.0, 1, 0.0, 1.0)

    def test_expression_integrand(self):
        f = ExprEvaluator(parse("x^2"))
        assert integrate(f, 0.0, 1.5, 1e-4).contains(1.125)


class TestFundamentalTheorem:
    """Jets of F(x) = integral of f from a base point."""

    def test_ftc_grid(self):
        grid = ftc_grid(1.0)
        assert len(grid) == 38
        assert max(grid) == 0.25
        assert min(grid) == -0.25

    def test_ftc_jet_of_reciprocal(self):
        f = ExprEvaluator(parse("1/x"))
        jet = ftc_jet(f, 1.0, 2.0, 1e-5, points=513, depth=30)
        assert jet.value == pytest.approx(math.log(2.0), abs=1e-5)
        assert jet.slope == pytest.approx(0.5, rel=1e-15)
        assert verify_ftc(f, jet, 1.0).passed

    def test_ftc_jet_of_cosine(self):
        f = ExprEvaluator(parse("cos(x)"))
        jet = ftc_jet(f, 0.0, 1.0, 1e-5, points=513, depth=30)
        assert jet.value == pytest.approx(math.sin(1.0), abs=1e-5)
        check = verify_ftc(f, jet, 0.0)
        assert check.passed
        assert check.checked > 0

    def test_ftc_envelope_carries_bracket_half_width(self):
        f = ExprEvaluator(parse("1/x"))
        jet = ftc_jet(f, 1.0, 2.0, 1e-5, points=513, depth=30)
        bracket = integrate(f, 1.0, 2.0, 1e-5)
        cont = continuity_jet0(f, 2.0, 0.5, 513, 30).env.certified()
        expected = cont.coeff / (cont.power + 1.0) + 0.5 * bracket.width
        assert bracket.width > 0.0
        assert jet.env.coeff == pytest.approx(expected, rel=1e-12)
        assert jet.env.power == cont.power

    def test_ftc_jet_of_constant_has_zero_envelope(self):
        f = ExprEvaluator(parse("3"))
        jet = ftc_jet(f, 0.0, 1.0, 1e-5, points=129, depth=20)
        assert jet.slope == 3.0
        assert jet.value == pytest.approx(3.0, rel=1e-12)
        assert jet.env.coeff == pytest.approx(0.0, abs=1e-12)

    def test_wrong_slope_detected(self):
        f = ExprEvaluator(parse("1/x"))
        good = ftc_jet(f, 1.0, 2.0, 1e-5, points=513, depth=30)
        bad = Jet1(good.x0, good.value, 0.6, good.env)
        check = verify_ftc(f, bad, 1.0)
        assert not check.passed
        assert check.witness_eps is not None
