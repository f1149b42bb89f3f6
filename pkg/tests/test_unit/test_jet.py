"""Unit tests for first-order jets and the derivative rules."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epscalc.core.envelope import ErrorEnvelope
from epscalc.core.jet import (
    Jet1,
    check_uniqueness,
    continuity_jet0,
    jet0_add,
    jet0_from_jet1,
    jet0_mul,
    jet0_recip,
    jet_add,
    jet_chain,
    jet_const,
    jet_div,
    jet_inverse,
    jet_monomial,
    jet_mul,
    jet_rational_power,
    jet_recip,
    jet_scale,
    jet_sub,
    jet_var,
    verify_contract,
)
from epscalc.errors import BaseMismatchError, CertificationError, DomainError, NotInvertibleError
from epscalc.geometry.jets import jet_cos, jet_exp, jet_ln, jet_sin, jet_sqrt
from epscalc.utils.grids import symmetric_halving_grid


class TestConstructors:
    """Constants, the variable and monomials."""

    def test_const_and_var(self):
        c = jet_const(4.0, 2.0)
        v = jet_var(2.0)
        assert (c.value, c.slope) == (4.0, 0.0)
        assert (v.value, v.slope) == (2.0, 1.0)
        assert c.env.is_zero and v.env.is_zero

    def test_monomial_square_at_three(self):
        jet = jet_monomial(2, 3.0)
        assert (jet.value, jet.slope) == (9.0, 6.0)
        assert verify_contract(jet, lambda x: x * x, points=257).passed

    def test_monomial_degree_must_be_positive(self):
        with pytest.raises(DomainError):
            jet_monomial(0, 1.0)

    def test_rational_power_cube_root(self):
        jet = jet_rational_power(1, 3, 8.0)
        assert jet.value == pytest.approx(2.0, rel=1e-15)
        assert jet.slope == pytest.approx(1.0 / 12.0, rel=1e-12)
        assert verify_contract(jet, lambda x: x ** (1.0 / 3.0), points=257).passed

    def test_rational_power_negative_base_rejected(self):
        with pytest.raises(DomainError):
            jet_rational_power(1, 2, -1.0)


class TestRules:
    """Sum, product, quotient, chain and inverse rules."""

    def test_sum_and_difference(self):
        a, b = jet_sin(0.3), jet_cos(0.3)
        s, d = jet_add(a, b), jet_sub(a, b)
        assert s.slope == pytest.approx(math.cos(0.3) - math.sin(0.3), rel=1e-12)
        assert d.slope == pytest.approx(math.cos(0.3) + math.sin(0.3), rel=1e-12)

    def test_scale(self):
        jet = jet_scale(jet_exp(0.2), -3.0)
        assert jet.slope == pytest.approx(-3.0 * math.exp(0.2), rel=1e-12)
        assert verify_contract(jet, lambda x: -3.0 * math.exp(x), points=257).passed

    def test_product_rule(self):
        jet = jet_mul(jet_sin(0.7), jet_exp(0.7))
        expected = math.exp(0.7) * (math.cos(0.7) + math.sin(0.7))
        assert jet.slope == pytest.approx(expected, rel=1e-12)
        assert verify_contract(jet, lambda x: math.sin(x) * math.exp(x), points=257).passed

    def test_quotient_rule(self):
        jet = jet_div(jet_sin(1.0), jet_var(1.0))
        expected = (math.cos(1.0) - math.sin(1.0)) / 1.0
        assert jet.slope == pytest.approx(expected, rel=1e-12)
        assert verify_contract(jet, lambda x: math.sin(x) / x, points=257).passed

    def test_reciprocal_of_zero_value(self):
        with pytest.raises(DomainError):
            jet_recip(jet_var(0.0))

    def test_reciprocal_shrinks_radius(self):
        jet = jet_recip(jet_var(0.1))
        assert jet.radius <= 0.05
        assert jet.slope == pytest.approx(-100.0)

    def test_chain_rule(self):
        inner = jet_monomial(2, 0.5)
        jet = jet_chain(jet_sin(inner.value), inner)
        assert jet.slope == pytest.approx(math.cos(0.25) * 1.0, rel=1e-12)
        assert verify_contract(jet, lambda x: math.sin(x * x), points=257).passed

    def test_chain_needs_matching_base(self):
        with pytest.raises(BaseMismatchError):
            jet_chain(jet_sin(0.3), jet_var(0.5))

    def test_mismatched_bases(self):
        with pytest.raises(BaseMismatchError):
            jet_add(jet_var(1.0), jet_var(1.5))

    def test_inverse_rule(self):
        forward = jet_exp(math.log(2.0))
        inverse = jet_inverse(forward)
        assert inverse.x0 == pytest.approx(2.0, rel=1e-14)
        assert inverse.slope == pytest.approx(0.5, rel=1e-12)
        assert verify_contract(inverse, math.log, points=257).passed

    def test_inverse_of_flat_jet(self):
        with pytest.raises(NotInvertibleError):
            jet_inverse(jet_const(1.0, 0.0))


class TestPrimitiveJets:
    """Jets of the geometric primitives against math oracles."""

    @pytest.mark.parametrize("x0", [-2.0, -0.4, 0.0, 0.9, 2.5])
    def test_sin_cos(self, x0):
        s, c = jet_sin(x0), jet_cos(x0)
        assert s.value == pytest.approx(math.sin(x0), abs=1e-12)
        assert s.slope == pytest.approx(math.cos(x0), abs=1e-12)
        assert c.slope == pytest.approx(-math.sin(x0), abs=1e-12)
        assert verify_contract(s, math.sin, points=257).passed

    def test_ln_domain(self):
        with pytest.raises(DomainError):
            jet_ln(0.0)

    def test_sqrt_slope(self):
        jet = jet_sqrt(4.0)
        assert jet.slope == pytest.approx(0.25, rel=1e-14)


class TestUniqueness:
    """Two valid jets of the same function share their slope."""

    def test_equal_paths_agree(self):
        a = jet_monomial(2, 3.0)
        b = jet_mul(jet_var(3.0), jet_var(3.0))
        verdict = check_uniqueness(a, b, symmetric_halving_grid(1.0, 40))
        assert verdict.passed
        assert verdict.slope_gap == 0.0

    def test_wrong_slope_detected(self):
        good = jet_monomial(2, 3.0)
        bad = Jet1(3.0, 9.0, 6.5, good.env)
        verdict = check_uniqueness(good, bad, symmetric_halving_grid(1.0, 40))
        assert not verdict.passed
        assert verdict.witness_eps is not None


class TestContract:
    """The sampled contract check."""

    def test_wrong_slope_fails(self):
        jet = Jet1(0.0, 0.0, 1.1, ErrorEnvelope.analytic(0.01, 1.0, 1.0))
        report = verify_contract(jet, math.sin, points=257)
        assert not report.passed
        assert report.message == "contract violated"

    def test_evaluation_failure_reported(self):
        jet = Jet1(0.5, math.log(0.5), 2.0, ErrorEnvelope.analytic(4.0, 1.0, 1.0))
        report = verify_contract(jet, math.log, points=65)
        assert not report.passed
        assert report.message.startswith("evaluation failed")


class TestJet0:
    """Continuity certificates."""

    def test_from_jet1(self):
        j0 = jet0_from_jet1(jet_sin(0.5))
        assert j0.value == pytest.approx(math.sin(0.5), abs=1e-12)
        assert j0.env.power == 1.0

    def test_algebra(self):
        a, b = jet0_from_jet1(jet_exp(0.0)), jet0_from_jet1(jet_cos(0.0))
        assert jet0_add(a, b).value == pytest.approx(2.0)
        assert jet0_mul(a, b).value == pytest.approx(1.0)
        assert jet0_recip(a).value == pytest.approx(1.0)
        with pytest.raises(DomainError):
            jet0_recip(jet0_from_jet1(jet_sin(0.0)))

    def test_continuity_of_sqrt_at_zero(self):
        j0 = continuity_jet0(lambda x: math.sqrt(abs(x)), 0.0, 0.5, points=513)
        assert j0.value == 0.0
        assert j0.env.power == pytest.approx(0.5, rel=1e-3)

    def test_blowup_is_not_continuous(self):
        f = lambda x: 1.0 if x == 0 else 1.0 + abs(x) ** -0.5  # noqa: E731
        with pytest.raises(CertificationError):
            continuity_jet0(f, 0.0, 0.5, points=129)


class TestLinearityProperties:
    """Jets of linear combinations are linear in the slopes."""

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(
        st.floats(-2.0, 2.0),
        st.floats(-5.0, 5.0),
        st.floats(-5.0, 5.0),
    )
    def test_linear_combination(self, x0, a, b):
        jet = jet_add(jet_scale(jet_sin(x0), a), jet_scale(jet_exp(x0), b))
        expected = a * math.cos(x0) + b * math.exp(x0)
        assert jet.slope == pytest.approx(expected, rel=1e-12, abs=1e-12)
        assert jet.value == pytest.approx(a * math.sin(x0) + b * math.exp(x0), rel=1e-12, abs=1e-12)
