"""Unit tests for error envelopes, their algebra and funnel boxes."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epscalc.core.envelope import (
    EnvelopeKind,
    ErrorEnvelope,
    FunnelBox,
    certify,
    env_compose,
    env_dominates,
    env_scale_bounded,
    env_sum,
    find_violation,
    fit_envelope,
    funnel_boxes,
)
from epscalc.errors import CertificationError, CertificationRequiredError, DomainError
from epscalc.utils.grids import certification_grid


def power_sampler(coeff, power, sign=1.0):
    return lambda eps: sign * coeff * abs(eps) ** power


class TestErrorEnvelope:
    """Construction and bound evaluation."""

    def test_analytic_bound(self):
        env = ErrorEnvelope.analytic(2.0, 1.5, 0.5)
        assert env.kind is EnvelopeKind.ANALYTIC
        assert env.bound(0.25) == pytest.approx(2.0 * 0.25**1.5)
        assert env.bound(-0.25) == env.bound(0.25)
        assert env.bound(0.0) == 0.0
        assert env.sup_bound() == pytest.approx(2.0 * 0.5**1.5)

    @pytest.mark.parametrize(
        "coeff, power, radius",
        [(-1.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, -2.0, 1.0), (1.0, 1.0, 0.0)],
    )
    def test_invalid_parameters_rejected(self, coeff, power, radius):
        with pytest.raises(DomainError):
            ErrorEnvelope.analytic(coeff, power, radius)

    def test_empirical_requires_sampler(self):
        with pytest.raises(DomainError):
            ErrorEnvelope(EnvelopeKind.EMPIRICAL, 1.0)

    def test_empirical_without_dominator_is_not_certified(self):
        env = ErrorEnvelope.empirical(lambda e: e, 1.0)
        assert env.certified_or_none() is None
        with pytest.raises(CertificationRequiredError):
            env.bound(0.1)
        assert env.to_dict() == {"kind": "empirical", "r": 1.0}

    def test_empirical_uses_dominator(self):
        dom = ErrorEnvelope.analytic(1.0, 1.0, 1.0)
        env = ErrorEnvelope.empirical(lambda e: 0.5 * e, 1.0, dom)
        assert env.bound(0.5) == 0.5
        assert env.to_dict() == {"C": 1.0, "p": 1.0, "r": 1.0}

    def test_zero_envelope(self):
        env = ErrorEnvelope.zero(0.5)
        assert env.is_zero
        assert env.bound(0.3) == 0.0

    def test_with_radius_only_shrinks(self):
        env = ErrorEnvelope.analytic(1.0, 2.0, 0.5)
        assert env.with_radius(0.25).radius == 0.25
        assert env.with_radius(4.0).radius == 0.5


class TestAlgebra:
    """Sum, bounded product and composition rules."""

    def test_sum_example(self):
        a = ErrorEnvelope.analytic(1.0, 2.0, 1.0, power_sampler(1.0, 2.0))
        b = ErrorEnvelope.analytic(1.0, 1.0, 1.0, power_sampler(1.0, 1.0))
        total = env_sum(a, b)
        assert (total.coeff, total.power, total.radius) == (2.0, 1.0, 1.0)
        # |eps^2 + eps| <= 2|eps| on [-1, 1]
        assert env_dominates(total, total.sampler)

    def test_sum_clamps_radius_to_one(self):
        a = ErrorEnvelope.analytic(1.0, 1.0, 3.0)
        b = ErrorEnvelope.analytic(1.0, 2.0, 2.0)
        assert env_sum(a, b).radius == 1.0

    def test_sum_ignores_zero_terms_for_power(self):
        a = ErrorEnvelope.analytic(1.0, 3.0, 1.0)
        total = env_sum(a, ErrorEnvelope.zero(1.0))
        assert total.power == 3.0

    def test_scale_bounded(self):
        a = ErrorEnvelope.analytic(2.0, 1.0, 0.5, power_sampler(2.0, 1.0))
        scaled = env_scale_bounded(a, 3.0, lambda e: 3.0 * (1.0 - e))
        assert scaled.coeff == 6.0
        assert scaled.power == 1.0

    def test_scale_by_negative_bound_rejected(self):
        with pytest.raises(DomainError):
            env_scale_bounded(ErrorEnvelope.analytic(1.0, 1.0, 1.0), -1.0)

    def test_compose_shrinks_inner_radius(self):
        outer = ErrorEnvelope.analytic(1.0, 2.0, 0.1)
        inner = ErrorEnvelope.analytic(1.0, 1.0, 1.0)
        composed = env_compose(outer, inner)
        assert composed.radius == pytest.approx(0.1)
        assert composed.coeff == 1.0
        assert composed.power == 2.0

    def test_compose_requires_analytic_inner(self):
        outer = ErrorEnvelope.analytic(1.0, 1.0, 1.0)
        inner = ErrorEnvelope.empirical(lambda e: e, 1.0)
        with pytest.raises(CertificationRequiredError):
            env_compose(outer, inner)


closure_params = st.tuples(
    st.floats(0.1, 4.0), st.floats(0.5, 3.0), st.floats(0.1, 2.0), st.sampled_from([-1.0, 1.0])
)


class TestClosureProperties:
    """Randomized closure: the rule's envelope dominates the combined sampler."""

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(closure_params, closure_params)
    def test_sum_closure(self, pa, pb):
        a = ErrorEnvelope.analytic(pa[0], pa[1], pa[2], power_sampler(pa[0], pa[1], pa[3]))
        b = ErrorEnvelope.analytic(pb[0], pb[1], pb[2], power_sampler(pb[0], pb[1], pb[3]))
        env = env_sum(a, b)
        assert env_dominates(env, env.sampler, points=129)

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(closure_params, st.floats(0.0, 3.0))
    def test_bounded_product_closure(self, pa, m):
        a = ErrorEnvelope.analytic(pa[0], pa[1], pa[2], power_sampler(pa[0], pa[1], pa[3]))
        env = env_scale_bounded(a, m, lambda e: m * (1.0 - e * e) / (1.0 + e * e))
        assert env_dominates(env, env.sampler, points=129)

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(closure_params, closure_params)
    def test_compose_closure(self, pa, pb):
        outer = ErrorEnvelope.analytic(pa[0], pa[1], pa[2], power_sampler(pa[0], pa[1], pa[3]))
        inner = ErrorEnvelope.analytic(pb[0], pb[1], pb[2], power_sampler(pb[0], pb[1], pb[3]))
        env = env_compose(outer, inner)
        assert env.radius <= inner.radius
        assert env_dominates(env, env.sampler, points=129)


class TestCertification:
    """Grid domination, certify and fitting."""

    def test_violation_found(self):
        env = ErrorEnvelope.analytic(1.0, 2.0, 1.0)
        witness = find_violation(env, lambda e: abs(e), points=65)
        assert witness is not None
        eps, value = witness
        assert abs(value) > eps * eps

    def test_certify_rejects_nonzero_at_origin(self):
        env = ErrorEnvelope.analytic(1.0, 1.0, 1.0, lambda e: e + 1e-3)
        with pytest.raises(CertificationError) as info:
            certify(env, points=65)
        assert info.value.eps is not None

    def test_noise_allowance_skips_origin(self):
        env = ErrorEnvelope.analytic(1.0, 2.0, 1.0)
        noise = lambda e: 1e-12  # noqa: E731
        offset = lambda e: e * e if e != 0.0 else 1e-20  # noqa: E731
        assert find_violation(env, offset, points=65, noise=noise) == (0.0, 1e-20)
        assert find_violation(env, lambda e: e * e + 1e-13, points=65, noise=noise) == (
            0.0,
            1e-13,
        )
        assert find_violation(env, lambda e: e * e, points=65, noise=noise) is None

    def test_certify_passes_through(self):
        env = ErrorEnvelope.analytic(1.0, 1.0, 1.0, lambda e: 0.5 * e)
        assert certify(env, points=65) is env

    def test_nan_sampler_is_an_error(self):
        env = ErrorEnvelope.analytic(1.0, 1.0, 1.0)
        with pytest.raises(CertificationError):
            find_violation(env, lambda e: float("nan"), points=17)

    def test_fit_recovers_power_law(self):
        eps = [float(e) for e in certification_grid(0.5, 161, 30) if e != 0.0]
        res = [3.0 * abs(e) ** 2 for e in eps]
        fit = fit_envelope(eps, res, inflate=1.1)
        assert fit.fitted_power == pytest.approx(2.0, rel=1e-6)
        assert fit.fitted_coeff == pytest.approx(3.0, rel=1e-6)
        assert fit.envelope.coeff == pytest.approx(3.3, rel=1e-6)

    def test_fit_rejects_non_shrinking_residual(self):
        eps = [0.5 * 2.0**-k for k in range(20)]
        res = [1.0 + 0.0 * e for e in eps]
        res[-1] = 2.0
        with pytest.raises(CertificationError):
            fit_envelope(eps, res)

    def test_fit_below_noise_gives_zero_envelope(self):
        eps = [0.5 * 2.0**-k for k in range(10)]
        fit = fit_envelope(eps, [1e-20] * 10, noise=[1e-16] * 10)
        assert fit.resolved == 0
        assert fit.envelope.coeff == 0.0


class TestFunnel:
    """Nested tolerance/width boxes."""

    def test_square_example_widths(self):
        env = ErrorEnvelope.analytic(1.0, 2.0, 1.0, power_sampler(1.0, 2.0))
        boxes = funnel_boxes(env, 3, 0.25, points=129)
        widths = [b.x_hi for b in boxes]
        assert widths == pytest.approx([0.5, math.sqrt(0.125), 0.25])
        assert [b.y_hi for b in boxes] == [0.25, 0.125, 0.0625]

    def test_boxes_are_nested(self):
        env = ErrorEnvelope.analytic(2.0, 1.0, 1.0, power_sampler(2.0, 1.0))
        boxes = funnel_boxes(env, 8, 0.1, points=129)
        for outer, inner in zip(boxes, boxes[1:]):
            assert outer.contains(inner)
            assert inner.x_hi < outer.x_hi

    def test_empirical_funnel(self):
        env = ErrorEnvelope.empirical(power_sampler(1.0, 2.0), 1.0)
        boxes = funnel_boxes(env, 4, 0.25, points=513, depth=30)
        assert len(boxes) == 4
        for box in boxes:
            # verified width never exceeds the true width sqrt(y)
            assert box.x_hi <= math.sqrt(box.y_hi) * (1 + 1e-12)

    def test_height_above_radius_bound_rejected(self):
        # C*r^p = 0.01, so every box of height 0.25 would clamp to width r
        env = ErrorEnvelope.analytic(1.0, 2.0, 0.1, lambda e: e * e)
        with pytest.raises(DomainError):
            funnel_boxes(env, 4, 0.25)

    def test_height_at_radius_bound_shrinks(self):
        env = ErrorEnvelope.analytic(1.0, 2.0, 0.5, power_sampler(1.0, 2.0))
        boxes = funnel_boxes(env, 4, 0.25, points=129)
        widths = [b.x_hi for b in boxes]
        assert widths[0] == pytest.approx(0.5)
        assert all(inner < outer for outer, inner in zip(widths, widths[1:]))

    def test_zero_envelope_has_no_funnel(self):
        with pytest.raises(DomainError):
            funnel_boxes(ErrorEnvelope.zero(), 3, 0.1)

    def test_empirical_saturated_widths_rejected(self):
        # every sample on radius 0.1 is below the first two heights
        env = ErrorEnvelope.empirical(power_sampler(1.0, 2.0), 0.1)
        with pytest.raises(DomainError):
            funnel_boxes(env, 4, 0.25, points=129)

    def test_violated_analytic_box_raises(self):
        # the sampler is larger than the claimed bound
        env = ErrorEnvelope.analytic(1.0, 2.0, 1.0, power_sampler(2.0, 2.0))
        with pytest.raises(CertificationError):
            funnel_boxes(env, 2, 0.25, points=65)

    @pytest.mark.parametrize("n_boxes, y0", [(0, 0.1), (3, 0.0), (3, -1.0)])
    def test_bad_arguments(self, n_boxes, y0):
        env = ErrorEnvelope.analytic(1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            funnel_boxes(env, n_boxes, y0)

    def test_degenerate_box_rejected(self):
        with pytest.raises(DomainError):
            FunnelBox(0.0, 1.0, -1.0, 1.0)
