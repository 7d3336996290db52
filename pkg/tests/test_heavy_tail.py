import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from levyspec import heavy_tail
from levyspec.errors import PreconditionError
from levyspec.rng import DEFAULT_SEED, WEIGHTS, stream

ALPHAS = [0.05, 0.25, 0.5, 1.0, 1.5, 1.9]


class TestTailLaw:
    def test_rejects_nonpositive_alpha(self):
        for bad in (0.0, -0.5):
            with pytest.raises(PreconditionError):
                heavy_tail.TailLaw(bad)

    def test_accepts_alpha_above_two(self):
        # The law itself is defined for every positive index; only the
        # matrix scaling modes restrict to (0, 2).
        assert heavy_tail.TailLaw(2.5).alpha == 2.5

    def test_rejects_theta_out_of_range(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(PreconditionError):
                heavy_tail.TailLaw(0.5, theta=bad)

    def test_is_frozen(self):
        law = heavy_tail.TailLaw(0.5)
        with pytest.raises(AttributeError):
            law.alpha = 1.0


class TestClosedForms:
    """The inverse-power family admits exact algebra for every sequence."""

    def test_tail_is_one_below_support(self):
        law = heavy_tail.TailLaw(0.5)
        assert heavy_tail.tail(law, 0.5) == 1.0
        assert heavy_tail.tail(law, 1.0) == 1.0

    def test_tail_power_decay(self):
        law = heavy_tail.TailLaw(0.5)
        assert heavy_tail.tail(law, 4.0) == pytest.approx(0.5, abs=1e-15)
        law = heavy_tail.TailLaw(1.5)
        assert heavy_tail.tail(law, 4.0) == pytest.approx(4.0**-1.5, abs=1e-15)

    @given(
        alpha=st.floats(0.05, 1.95),
        u=st.floats(1e-6, 1.0, exclude_max=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_quantile_inverts_tail(self, alpha, u):
        law = heavy_tail.TailLaw(alpha)
        t = heavy_tail.quantile(law, u)
        assert t >= 1.0
        np.testing.assert_allclose(heavy_tail.tail(law, t), u, rtol=1e-9)

    def test_quantile_rejects_bad_levels(self):
        law = heavy_tail.TailLaw(0.5)
        for bad in (0.0, -0.2, 1.5):
            with pytest.raises(PreconditionError):
                heavy_tail.quantile(law, bad)

    def test_a_n_is_exact_power(self):
        assert heavy_tail.a_n(heavy_tail.TailLaw(0.5), 100) == pytest.approx(1e4)
        assert heavy_tail.a_n(heavy_tail.TailLaw(1.0), 37) == pytest.approx(37.0)
        assert heavy_tail.a_n(heavy_tail.TailLaw(1.5), 64) == pytest.approx(16.0)

    def test_w_n_closed_form(self):
        # alpha != 1: (alpha/(alpha-1)) (1 - a_n^{1-alpha}); alpha = 1: log n.
        law = heavy_tail.TailLaw(0.5)
        assert heavy_tail.w_n(law, 16) == pytest.approx(15.0)
        assert heavy_tail.w_n(heavy_tail.TailLaw(1.0), 100) == pytest.approx(math.log(100))
        assert heavy_tail.w_n(law, 1) == 0.0

    def test_kappa_boundary_and_range(self):
        assert heavy_tail.kappa_n(heavy_tail.TailLaw(1.5), 64) == pytest.approx(4.0)
        assert heavy_tail.kappa_n(heavy_tail.TailLaw(1.0), 64) == pytest.approx(math.log(64))
        for bad in (0.5, 0.99):
            with pytest.raises(PreconditionError):
                heavy_tail.kappa_n(heavy_tail.TailLaw(bad), 64)

    def test_mean(self):
        assert heavy_tail.mean(heavy_tail.TailLaw(1.5)) == pytest.approx(3.0)
        assert heavy_tail.mean(heavy_tail.TailLaw(1.0)) == math.inf
        assert heavy_tail.mean(heavy_tail.TailLaw(0.5)) == math.inf

    def test_kappa_eff_mean_correction(self):
        # Finite-mean laws rescale kappa by the mean; at alpha = 1 the
        # slowly varying factor already self-normalizes.
        law = heavy_tail.TailLaw(1.5)
        assert heavy_tail.kappa_eff(law, 64) == pytest.approx(
            3.0 * heavy_tail.kappa_n(law, 64)
        )
        law1 = heavy_tail.TailLaw(1.0)
        assert heavy_tail.kappa_eff(law1, 64) == pytest.approx(
            heavy_tail.kappa_n(law1, 64)
        )

    def test_truncated_moment_closed_form(self):
        law = heavy_tail.TailLaw(0.5)
        # alpha/(p-alpha) (t^{p-alpha} - 1) = 1 * (4^{1/2} - 1) = 1
        assert heavy_tail.truncated_moment(law, 1.0, 4.0) == pytest.approx(1.0)

    def test_truncated_moment_rejections(self):
        law = heavy_tail.TailLaw(1.0)
        with pytest.raises(PreconditionError):
            heavy_tail.truncated_moment(law, 1.0, 10.0)  # p <= alpha diverges
        with pytest.raises(PreconditionError):
            heavy_tail.truncated_moment(law, 2.0, 0.5)  # below support

    def test_scaling_sequences_bundle(self):
        law = heavy_tail.TailLaw(1.5)
        seq = heavy_tail.scaling_sequences(law, 64)
        assert seq.n == 64
        assert seq.a == pytest.approx(16.0)
        assert seq.kappa == pytest.approx(4.0)
        seq = heavy_tail.scaling_sequences(heavy_tail.TailLaw(0.5), 64)
        assert seq.kappa is None


class TestSampling:
    def test_streams_reproduce(self):
        law = heavy_tail.TailLaw(0.5)
        a = heavy_tail.sample_weights(law, 30, stream(DEFAULT_SEED, 0, WEIGHTS))
        b = heavy_tail.sample_weights(law, 30, stream(DEFAULT_SEED, 0, WEIGHTS))
        np.testing.assert_array_equal(a, b)

    def test_weights_symmetric_and_supported(self):
        law = heavy_tail.TailLaw(0.5)
        U = heavy_tail.sample_weights(law, 40, stream(1, 0, WEIGHTS))
        np.testing.assert_array_equal(U, U.T)
        assert U.min() >= 1.0

    def test_marginal_law(self):
        # KS against the exact CDF 1 - t^{-alpha}; threshold leaves
        # ~4 sigma of slack at this sample size.
        law = heavy_tail.TailLaw(0.75)
        x = heavy_tail._sample_abs(law, 4000, stream(2, 0, WEIGHTS))
        cdf = lambda ts: 1.0 - np.asarray(ts, dtype=float) ** -law.alpha
        stat = scipy.stats.kstest(x, cdf).statistic
        assert stat < 1.9 / math.sqrt(4000)

    def test_signed_entries_follow_theta(self):
        law = heavy_tail.TailLaw(0.5, theta=1.0)
        X = heavy_tail.sample_signed(law, 40, stream(3, 0, WEIGHTS))
        assert X.min() > 0.0
        law = heavy_tail.TailLaw(0.5, theta=0.0)
        X = heavy_tail.sample_signed(law, 40, stream(3, 0, WEIGHTS))
        assert X.max() < 0.0

    def test_signed_magnitudes_match_unsigned_stream(self):
        # Signs are drawn after magnitudes, so |X| reproduces U.
        law = heavy_tail.TailLaw(0.5, theta=0.5)
        X = heavy_tail.sample_signed(law, 25, stream(4, 0, WEIGHTS))
        U = heavy_tail.sample_weights(
            heavy_tail.TailLaw(0.5, theta=1.0), 25, stream(4, 0, WEIGHTS)
        )
        np.testing.assert_allclose(np.abs(X), U)

    def test_finite_variance_surrogate(self):
        U = heavy_tail.sample_finite_variance_weights(50, stream(5, 0, WEIGHTS))
        np.testing.assert_array_equal(U, U.T)
        assert U.min() >= 0.5 and U.max() <= 1.5
