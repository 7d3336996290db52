import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from levyspec import heavy_tail, matrix_models
from levyspec.errors import PreconditionError
from levyspec.rng import DEFAULT_SEED, WEIGHTS, stream


def small_ensemble(n=12, alpha=0.5, seed=DEFAULT_SEED):
    law = heavy_tail.TailLaw(alpha)
    return matrix_models.sample_ensemble(law, n, stream(seed, 0, WEIGHTS)), law


symmetric_weights = st.integers(2, 10).flatmap(
    lambda n: hnp.arrays(
        np.float64,
        (n, n),
        elements=st.floats(0.0, 50.0, allow_nan=False, allow_infinity=False),
    ).map(lambda A: A + A.T)
)


class TestAssembly:
    def test_kernel_rows_sum_to_one(self):
        ens, _ = small_ensemble()
        np.testing.assert_allclose(ens.K.sum(axis=1), 1.0, atol=1e-12)

    def test_symmetrization_is_symmetric(self):
        ens, _ = small_ensemble()
        np.testing.assert_allclose(ens.S, ens.S.T, atol=0.0)

    def test_kernel_and_symmetrization_share_spectrum(self):
        # S = D^{1/2} K D^{-1/2} is a similarity, so the spectra agree
        # even though K itself is not symmetric.
        ens, _ = small_ensemble(n=15)
        ev_k = np.sort(np.linalg.eigvals(ens.K).real)
        ev_s = np.linalg.eigvalsh(ens.S)
        np.testing.assert_allclose(ev_k, ev_s, atol=1e-10)

    def test_invariant_vector_is_row_sums(self):
        ens, _ = small_ensemble()
        np.testing.assert_allclose(ens.rho, ens.U.sum(axis=1))
        np.testing.assert_allclose(ens.rho_hat, ens.rho / ens.rho.sum())
        assert (np.diff(ens.rho_ranked) <= 0).all()

    def test_isolated_vertex_becomes_absorbing(self):
        U = np.zeros((3, 3))
        U[0, 1] = U[1, 0] = 2.0
        ens = matrix_models.build(U)
        np.testing.assert_array_equal(ens.K[2], [0.0, 0.0, 1.0])
        np.testing.assert_array_equal(ens.S[2], [0.0, 0.0, 1.0])
        np.testing.assert_allclose(ens.K.sum(axis=1), 1.0)

    def test_all_zero_weights_give_uniform_invariant(self):
        ens = matrix_models.build(np.zeros((4, 4)))
        np.testing.assert_allclose(ens.rho_hat, 0.25)
        np.testing.assert_allclose(ens.K, np.eye(4))

    def test_build_rejections(self):
        with pytest.raises(PreconditionError):
            matrix_models.build(np.ones((3, 4)))
        with pytest.raises(PreconditionError):
            matrix_models.build(np.arange(9.0).reshape(3, 3))  # asymmetric
        U = -np.ones((3, 3))
        with pytest.raises(PreconditionError):
            matrix_models.build(U)
        with pytest.raises(PreconditionError):
            matrix_models.build(np.ones((5, 5)), max_n=4)

    def test_from_signed_keeps_signs_in_entries(self):
        X = np.array([[0.0, -2.0], [-2.0, 1.0]])
        ens = matrix_models.from_signed(X)
        np.testing.assert_array_equal(ens.entries, X)
        np.testing.assert_array_equal(ens.U, np.abs(X))

    @given(U=symmetric_weights)
    @settings(max_examples=40, deadline=None)
    def test_spectrum_lies_in_unit_interval(self, U):
        ens = matrix_models.build(U)
        lam = np.linalg.eigvalsh(ens.S)
        assert lam[0] >= -1.0 - 1e-9
        assert lam[-1] <= 1.0 + 1e-9
        np.testing.assert_allclose(ens.K.sum(axis=1), 1.0, atol=1e-9)


class TestScaledMatrix:
    def test_iid_mode_scales_signed_entries(self):
        ens, law = small_ensemble(alpha=0.5)
        M = matrix_models.scaled_matrix(ens, law, "iid_an")
        np.testing.assert_allclose(
            M, ens.entries / heavy_tail.a_n(law, ens.n)
        )

    def test_markov_modes(self):
        ens, law = small_ensemble(alpha=1.5)
        np.testing.assert_allclose(
            matrix_models.scaled_matrix(ens, law, "markov_unscaled"), ens.S
        )
        np.testing.assert_allclose(
            matrix_models.scaled_matrix(ens, law, "markov_sqrtn"),
            np.sqrt(ens.n) * ens.S,
        )
        kap = heavy_tail.kappa_eff(law, ens.n)
        np.testing.assert_allclose(
            matrix_models.scaled_matrix(ens, law, "markov_kappa"), kap * ens.S
        )

    def test_kappa_mode_needs_boundary_range(self):
        ens, law = small_ensemble(alpha=0.5)
        with pytest.raises(PreconditionError):
            matrix_models.scaled_matrix(ens, law, "markov_kappa")

    def test_unknown_mode_rejected(self):
        ens, law = small_ensemble()
        with pytest.raises(PreconditionError):
            matrix_models.scaled_matrix(ens, law, "bogus")
