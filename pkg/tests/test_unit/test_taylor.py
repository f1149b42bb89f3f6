"""Unit tests for truncated series and order-n Taylor jets."""

import math
from fractions import Fraction

import pytest

from epscalc.analysis.taylor import (
    TaylorJet,
    expr_series,
    leading_coefficient_estimates,
    power_series,
    series_compose,
    series_mul,
    series_pow_int,
    series_recip,
    tjet_add,
    tjet_arith,
    tjet_compose,
    tjet_from_expr,
    tjet_mul,
    verify_peano,
)
from epscalc.core.envelope import EnvelopeKind, ErrorEnvelope
from epscalc.errors import BaseMismatchError, DomainError
from epscalc.expr import ExprEvaluator, eval_tjet, parse

GRID = {"points": 513, "depth": 30}


def maclaurin(name, n):
    out, fact = [], Fraction(1)
    for k in range(n + 1):
        if k:
            fact *= k
        if name == "exp":
            out.append(float(1 / fact))
        elif name == "sin":
            out.append(float((-1) ** (k // 2) / fact) if k % 2 else 0.0)
        else:
            out.append(0.0 if k % 2 else float((-1) ** (k // 2) / fact))
    return out


class TestSeries:
    """Truncated coefficient-list arithmetic."""

    def test_mul(self):
        assert series_mul([1.0, 1.0, 0.0], [1.0, 1.0, 0.0]) == [1.0, 2.0, 1.0]

    def test_recip_geometric(self):
        assert series_recip([1.0, -1.0, 0.0, 0.0]) == [1.0, 1.0, 1.0, 1.0]

    def test_recip_of_zero_constant(self):
        with pytest.raises(DomainError):
            series_recip([0.0, 1.0])

    def test_integer_power(self):
        assert series_pow_int([1.0, 1.0, 0.0, 0.0], 3) == [1.0, 3.0, 3.0, 1.0]

    def test_compose_square_into_geometric(self):
        # 1/(1 - u) with u = eps^2
        assert series_compose([1.0, 1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 1.0, 0.0, 0.0]) == [
            1.0, 0.0, 1.0, 0.0, 1.0,
        ]

    def test_binomial_series(self):
        assert power_series(4.0, Fraction(1, 2), 2) == pytest.approx([2.0, 0.25, -1.0 / 64.0])
        assert power_series(2.0, Fraction(3), 4) == [8.0, 12.0, 6.0, 1.0, 0.0]
        with pytest.raises(DomainError):
            power_series(0.0, Fraction(-1, 2), 2)


class TestExprSeries:
    """Coefficients of parsed expressions."""

    @pytest.mark.parametrize("name", ["exp", "sin", "cos"])
    def test_primitives_at_zero(self, name):
        got = expr_series(parse(f"{name}(x)"), 0.0, 6)
        assert got == pytest.approx(maclaurin(name, 6), abs=1e-12)

    def test_rational_function(self):
        assert expr_series(parse("1/(1 - x)"), 0.0, 4) == [1.0] * 5

    def test_composition(self):
        got = expr_series(parse("sin(x^2)"), 0.0, 6)
        assert got == pytest.approx([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0 / 6.0], abs=1e-12)

    def test_sqrt_about_four(self):
        got = expr_series(parse("sqrt(x)"), 4.0, 2)
        assert got == pytest.approx([2.0, 0.25, -1.0 / 64.0], rel=1e-14)

    def test_log_about_one(self):
        got = expr_series(parse("ln(x)"), 1.0, 4)
        assert got == pytest.approx([0.0, 1.0, -0.5, 1.0 / 3.0, -0.25], abs=1e-14)

    def test_domain_error_location(self):
        with pytest.raises(DomainError) as info:
            expr_series(parse("1 + ln(x)"), 0.0, 2)
        assert info.value.location == "ln(x)"


class TestTaylorJet:
    """Certified jets, the Peano check and truncation."""

    @pytest.mark.parametrize("name", ["exp", "sin", "cos"])
    def test_order_five_at_zero(self, name):
        tj = tjet_from_expr(parse(f"{name}(x)"), 0.0, 5, **GRID)
        assert list(tj.coeffs) == pytest.approx(maclaurin(name, 5), abs=1e-10)
        assert tj.env.kind is EnvelopeKind.ANALYTIC
        assert tj.to_dict()["order"] == 5

    def test_peano_passes(self):
        e = parse("exp(x)")
        tj = tjet_from_expr(e, 0.3, 3, **GRID)
        verdict = verify_peano(tj, ExprEvaluator(e), **GRID)
        assert verdict.passed
        assert verdict.to_dict()["pass"] is True

    def test_wrong_coefficient_rejected(self):
        wrong = maclaurin("sin", 5)
        wrong[3] = -wrong[3]
        probe = TaylorJet(0.0, tuple(wrong), ErrorEnvelope.zero(0.5))
        verdict = verify_peano(probe, ExprEvaluator(parse("sin(x)")), **GRID)
        assert not verdict.passed
        assert verdict.witness_eps is not None
        assert verdict.witness_eps != 0.0

    def test_order_must_be_positive(self):
        with pytest.raises(DomainError):
            tjet_from_expr(parse("x"), 0.0, 0)
        with pytest.raises(DomainError):
            TaylorJet(0.0, (1.0,), ErrorEnvelope.zero(1.0))

    def test_truncate(self):
        tj = tjet_from_expr(parse("exp(x)"), 0.0, 5, **GRID)
        low = tj.truncate(2)
        assert low.order == 2
        assert low.coeffs == tj.coeffs[:3]
        assert low.env.certified_or_none() is not None
        assert tj.truncate(5) is tj
        with pytest.raises(DomainError):
            tj.truncate(7)

    def test_truncated_jet_keeps_peano_form(self):
        e = parse("cos(x)")
        low = tjet_from_expr(e, 0.0, 4, **GRID).truncate(2)
        assert verify_peano(low, ExprEvaluator(e), **GRID).passed

    def test_polynomial(self):
        tj = TaylorJet(1.0, (1.0, 2.0, 3.0), ErrorEnvelope.zero(1.0))
        assert tj.polynomial(0.5) == 1.0 + 1.0 + 0.75

    def test_eval_tjet_delegates(self):
        tj = eval_tjet(parse("x^2"), 3.0, 2, **GRID)
        assert list(tj.coeffs) == [9.0, 6.0, 1.0]

    def test_leading_coefficient_estimates(self):
        e = parse("exp(x)")
        tj = tjet_from_expr(e, 0.0, 2, **GRID)
        estimates = leading_coefficient_estimates(tj, ExprEvaluator(e))
        eps, value = estimates[10]
        assert eps == pytest.approx(0.5 * 2.0**-10)
        assert value == pytest.approx(0.5, abs=1e-3)


class TestTaylorArithmetic:
    """Sum, product and composition of certified jets."""

    def test_product_matches_double_angle(self):
        sin_j = tjet_from_expr(parse("sin(x)"), 0.0, 5, **GRID)
        cos_j = tjet_from_expr(parse("cos(x)"), 0.0, 5, **GRID)
        product = tjet_mul(sin_j, cos_j)
        assert list(product.coeffs) == pytest.approx(
            [0.0, 1.0, 0.0, -2.0 / 3.0, 0.0, 2.0 / 15.0], abs=1e-10
        )
        assert verify_peano(product, ExprEvaluator(parse("sin(x)*cos(x)")), **GRID).passed

    def test_sum_and_dispatch(self):
        a = tjet_from_expr(parse("exp(x)"), 0.0, 3, **GRID)
        b = tjet_from_expr(parse("x^2"), 0.0, 3, **GRID)
        total = tjet_arith(a, b, "add")
        assert list(total.coeffs) == pytest.approx([1.0, 1.0, 1.5, 1.0 / 6.0], abs=1e-12)
        with pytest.raises(DomainError):
            tjet_arith(a, b, "pow")

    def test_mixed_orders_truncate(self):
        a = tjet_from_expr(parse("exp(x)"), 0.0, 4, **GRID)
        b = tjet_from_expr(parse("sin(x)"), 0.0, 2, **GRID)
        assert tjet_add(a, b).order == 2

    def test_base_mismatch(self):
        a = tjet_from_expr(parse("exp(x)"), 0.0, 2, **GRID)
        b = tjet_from_expr(parse("exp(x)"), 0.5, 2, **GRID)
        with pytest.raises(BaseMismatchError):
            tjet_add(a, b)

    def test_compose_exp_of_sin(self):
        outer = tjet_from_expr(parse("exp(x)"), 0.0, 3, **GRID)
        inner = tjet_from_expr(parse("sin(x)"), 0.0, 3, **GRID)
        composed = tjet_compose(outer, inner)
        assert list(composed.coeffs) == pytest.approx([1.0, 1.0, 0.5, 0.0], abs=1e-12)
        assert composed.env.certified_or_none() is not None

    def test_compose_needs_matching_base(self):
        outer = tjet_from_expr(parse("exp(x)"), 1.0, 2, **GRID)
        inner = tjet_from_expr(parse("sin(x)"), 0.0, 2, **GRID)
        with pytest.raises(BaseMismatchError):
            tjet_compose(outer, inner)

    def test_remainder_of_product_is_small(self):
        sin_j = tjet_from_expr(parse("sin(x)"), 0.0, 3, **GRID)
        product = tjet_mul(sin_j, sin_j)
        eps = 0.01
        f = math.sin(eps) ** 2
        assert abs(f - product.polynomial(eps)) <= eps**3 * product.env.bound(eps) + 1e-15
