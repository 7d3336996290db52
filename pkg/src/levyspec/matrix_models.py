"""Finite-n random kernel ensembles built from a symmetric weight matrix.

Given symmetric nonnegative weights U with row sums rho_i = sum_j U_ij,
the reversible Markov kernel and its symmetrization are

    K_ij = U_ij / rho_i,        S_ij = U_ij / sqrt(rho_i rho_j).

S = D^{1/2} K D^{-1/2} with D = diag(rho), so K and S share their
spectrum while S stays symmetric; every eigensolve in the library runs
on S.  A row with rho_i = 0 (impossible for the built-in law, which has
strictly positive weights) is replaced by the unit row in both K and S,
keeping the two spectra aligned.

The invariant probability vector of K is rho_hat = rho / sum(rho);
rho_ranked is its descending rearrangement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .heavy_tail import TailLaw, a_n, kappa_eff, sample_signed

# Dense storage: desk-scale experiments stay in the low thousands.
MAX_N = 4096

MODES = ("iid_an", "markov_kappa", "markov_sqrtn", "markov_unscaled")


@dataclass(frozen=True)
class WeightedEnsemble:
    """A sampled weight matrix with every kernel-derived view attached.

    ``entries`` holds the signed matrix X when the ensemble was sampled
    with signs; it equals U for purely nonnegative input.
    """

    n: int
    U: np.ndarray
    rho: np.ndarray
    K: np.ndarray
    S: np.ndarray
    rho_hat: np.ndarray
    rho_ranked: np.ndarray
    entries: np.ndarray = field(repr=False, default=None)


def build(U: np.ndarray, max_n: int = MAX_N) -> WeightedEnsemble:
    """Assemble the ensemble from symmetric nonnegative weights."""
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise PreconditionError(f"U must be square, got shape {U.shape}")
    if (U < 0).any():
        raise PreconditionError("U must be nonnegative")
    return _assemble(U, U, max_n)


def from_signed(X: np.ndarray, max_n: int = MAX_N) -> WeightedEnsemble:
    """Assemble the ensemble from a symmetric signed matrix, using |X| as
    the weights while keeping X available for i.i.d.-mode scaling."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise PreconditionError(f"X must be square, got shape {X.shape}")
    return _assemble(np.abs(X), X, max_n)


def _assemble(U: np.ndarray, entries: np.ndarray, max_n: int) -> WeightedEnsemble:
    n = U.shape[0]
    if n < 1:
        raise PreconditionError("matrix must have at least one row")
    if n > max_n:
        raise PreconditionError(f"n={n} exceeds the dense-storage cap {max_n}")
    if not np.allclose(U, U.T, rtol=1e-12, atol=0.0):
        raise PreconditionError("weight matrix must be symmetric")

    rho = U.sum(axis=1)
    zero = rho == 0.0

    with np.errstate(divide="ignore", invalid="ignore"):
        K = U / rho[:, None]
        d = 1.0 / np.sqrt(rho)
        S = U * d[:, None] * d[None, :]
    if zero.any():
        K[zero, :] = 0.0
        K[zero, zero] = 1.0
        S[zero, :] = 0.0
        S[:, zero] = 0.0
        S[zero, zero] = 1.0

    total = rho.sum()
    if total > 0.0:
        rho_hat = rho / total
    else:
        # All-zero weights degenerate to the identity kernel; its
        # invariant measure is any distribution, so report uniform.
        rho_hat = np.full(n, 1.0 / n)
    rho_ranked = np.sort(rho_hat)[::-1]

    return WeightedEnsemble(
        n=n, U=U, rho=rho, K=K, S=S, rho_hat=rho_hat,
        rho_ranked=rho_ranked, entries=entries,
    )


def sample_ensemble(
    law: TailLaw, n: int, rng: np.random.Generator, max_n: int = MAX_N
) -> WeightedEnsemble:
    """Draw X from the law (signs applied per entry with probability theta)
    and build the ensemble on U = |X|."""
    return from_signed(sample_signed(law, n, rng), max_n)


def scaled_matrix(ens: WeightedEnsemble, law: TailLaw, mode: str) -> np.ndarray:
    """The symmetric matrix whose spectrum a given experiment studies.

    iid_an           a_n^{-1} X        (signed entries, any alpha)
    markov_kappa     kappa_n * S       (alpha in [1, 2); kappa mean-adjusted,
                                        see :func:`heavy_tail.kappa_eff`)
    markov_sqrtn     sqrt(n) * S       (finite-variance bulk scaling)
    markov_unscaled  S                 (spectrum inside [-1, 1])

    S stands in for K throughout: same spectrum, symmetric storage.
    """
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "iid_an":
        return ens.entries / a_n(law, ens.n)
    if mode == "markov_kappa":
        return kappa_eff(law, ens.n) * ens.S
    if mode == "markov_sqrtn":
        return np.sqrt(ens.n) * ens.S
    return ens.S
