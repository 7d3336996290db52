import math

import numpy as np
import pytest
import scipy.integrate

from levyspec import rde
from levyspec.errors import PreconditionError

# Reference values computed independently at 50-digit working precision
# (mpmath: Gauss-Legendre quadrature of the fixed-point map plus
# bisection to 1e-30).  Layout: beta, t, Q(t), E g(t).
REFERENCE = [
    (0.5, 0.05, 0.77941103385657924, 0.91540394863436208),
    (0.5, 1.0, 0.59984285049544118, 0.43480950339892566),
    (0.75, 0.5, 0.48936623543692912, 0.40403217343943436),
    (0.75, 1.0, 0.44194383138181645, 0.34918090478427961),
    (0.75, 2.0, 0.36986348460836142, 0.27208177594089934),
]


class TestFixedPoint:
    def test_against_high_precision_references(self):
        for beta, t, q_ref, eg_ref in REFERENCE:
            q = rde.solve_q(t, beta)
            np.testing.assert_allclose(q, q_ref, atol=5e-9, rtol=0.0)
            np.testing.assert_allclose(
                rde.expected_g(t, beta, q), eg_ref, atol=5e-9, rtol=0.0
            )

    def test_zero_argument_closed_form(self):
        for beta in (0.25, 0.5, 0.75, 0.9):
            target = (math.gamma(1.0 + beta) * math.gamma(1.0 - beta)) ** -0.5
            assert rde.solve_q(0.0, beta) == pytest.approx(target, abs=1e-12)
            assert rde.tension_bound(beta) == pytest.approx(target, abs=1e-15)

    def test_fixed_point_residual_vanishes(self):
        # phi is evaluated through quadrature, so this closes the loop
        # independently of the bisection's stopping rule.
        for beta, t in ((0.25, 0.3), (0.5, 1.0), (0.75, 5.0)):
            q = rde.solve_q(t, beta)
            assert abs(rde.phi(q, t, beta) - q) < 5e-9

    def test_closed_form_is_a_fixed_point_in_the_limit(self):
        # At t just above 0 the numeric integral must reproduce the
        # algebraic fixed point.
        for beta in (0.25, 0.5, 0.75):
            q0 = rde.tension_bound(beta)
            assert abs(rde.phi(q0, 1e-12, beta) - q0) < 1e-6

    def test_q_decreases_in_t(self):
        sol = rde.solve(1.0, [0.0, 0.1, 0.5, 1.0, 5.0, 50.0])
        assert (np.diff(sol.Q) < 0).all()
        assert (np.diff(sol.Eg) < 0).all()

    def test_large_t_scaling_invariant(self):
        # t^beta Q(t) -> 1; at t = 1000 the defect is below 1e-3 for
        # beta = 0.75.
        q = rde.solve_q(1000.0, 0.75)
        assert abs(1000.0**0.75 * q - 1.0) < 1e-3

    def test_solution_bundle(self):
        sol = rde.solve(1.5, [0.0, 1.0])
        assert sol.beta == pytest.approx(0.75)
        assert sol.Q[0] == pytest.approx(rde.tension_bound(0.75))
        assert sol.t_grid.shape == sol.Q.shape == sol.Eg.shape

    def test_rejections(self):
        with pytest.raises(PreconditionError):
            rde.solve(2.0, [0.0])
        with pytest.raises(PreconditionError):
            rde.solve(1.0, [-1.0])
        with pytest.raises(PreconditionError):
            rde.phi(-0.1, 1.0, 0.5)
        with pytest.raises(PreconditionError):
            rde.phi(0.0, 0.0, 0.5)
        with pytest.raises(PreconditionError):
            rde.expected_g(-1.0, 0.5)


class TestDensityAtZero:
    def test_alpha_one_closed_forms(self):
        d = rde.density_at_zero(1.0)
        assert d.value == pytest.approx(1.0 / math.pi, abs=1e-15)
        assert d.alternate == pytest.approx(4.0 / math.pi, abs=1e-15)

    def test_value_is_limit_of_smoothed_density(self):
        # (1/pi) E g(it) approaches the closed form as t shrinks, with a
        # correction that is close to linear in t (roughly 0.6 t here).
        d = rde.density_at_zero(1.0)
        gaps = [
            abs(rde.expected_g(t, 0.5) / math.pi - d.value)
            for t in (0.1, 0.05, 0.02)
        ]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 0.012

    def test_zero_limit_matches_expected_g(self):
        for alpha in (0.5, 1.0, 1.5):
            d = rde.density_at_zero(alpha)
            assert d.value == pytest.approx(
                rde.expected_g(0.0, 0.5 * alpha) / math.pi, abs=1e-14
            )


class TestTailConstants:
    def test_quadrature_matches_reflection_formula(self):
        for alpha in (0.5, 1.0, 1.25, 1.5):
            target = alpha * math.pi / math.sin(math.pi * alpha / 2.0)
            assert rde.tail_constant(alpha) == pytest.approx(target, abs=1e-7)

    def test_alpha_one_value(self):
        assert rde.tail_constant(1.0) == pytest.approx(math.pi, abs=1e-8)

    def test_tail_ratio_references(self):
        # Same mpmath pipeline as REFERENCE; the 3/4 index converges
        # too slowly to reach 1 +- 0.02 by t = 100 and that is a real
        # property of the law, not a solver artifact.
        refs = [
            (0.75, 0.955433312876),
            (1.0, 0.98044603786),
            (1.25, 0.990630713442),
        ]
        for alpha, ref in refs:
            np.testing.assert_allclose(
                rde.tail_ratio(alpha, 100.0), ref, atol=1e-6
            )

    def test_tail_ratio_approaches_one(self):
        r10 = rde.tail_ratio(1.25, 10.0)
        r100 = rde.tail_ratio(1.25, 100.0)
        assert abs(r100 - 1.0) < abs(r10 - 1.0)


class TestSecondMomentQuadrature:
    def test_frozen_values(self):
        np.testing.assert_allclose(
            rde.gamma2_quadrature(0.5), 0.37677475985977027, atol=1e-6
        )
        np.testing.assert_allclose(
            rde.gamma2_quadrature(0.05), 0.49893576572430787, atol=1e-6
        )

    def test_small_alpha_limit_is_one_half(self):
        assert abs(rde.gamma2_quadrature(0.05) - 0.5) < 0.05

    def test_one_dimensional_reduction(self):
        # Integrating out the radial coordinate leaves
        # (1-alpha) int_0^1 dw / (w^a + (1-w)^a), an independent check
        # of the double integral.
        alpha = 0.5
        val, err = scipy.integrate.quad(
            lambda w: 1.0 / (w**alpha + (1.0 - w) ** alpha), 0.0, 1.0
        )
        np.testing.assert_allclose(
            rde.gamma2_quadrature(alpha), (1.0 - alpha) * val, atol=1e-8
        )

    def test_range_enforced(self):
        for bad in (0.0, 1.0, 1.5):
            with pytest.raises(PreconditionError):
                rde.gamma2_quadrature(bad)


class TestStableTransform:
    def test_frozen_value(self):
        # exp(-sqrt(2)) at beta = 1/2, t = 1.
        assert rde.stable_laplace(0.5, 1.0) == pytest.approx(
            math.exp(-math.sqrt(2.0)), abs=1e-15
        )

    def test_normalization_pins_the_negative_moment(self):
        # E S^{-beta} recovered from the transform must equal Q(0);
        # this fixes the constant inside the exponent uniquely.
        for beta in (0.25, 0.5, 0.75):
            val, err = scipy.integrate.quad(
                lambda t: t ** (beta - 1.0) * rde.stable_laplace(beta, t),
                0.0,
                np.inf,
            )
            moment = val / math.gamma(beta)
            # 1e-7 covers the quad error at the t^{beta-1} endpoint.
            assert moment == pytest.approx(rde.tension_bound(beta), abs=1e-7)

    def test_transform_bounds(self):
        assert rde.stable_laplace(0.5, 0.0) == 1.0
        assert 0.0 < rde.stable_laplace(0.5, 10.0) < 1.0
