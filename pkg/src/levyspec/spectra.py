"""Spectral views of a symmetric matrix: ESD moments, Stieltjes transform,
trimmed histograms, gap and Schatten diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NumericError, PreconditionError


@dataclass(frozen=True)
class SpectralSample:
    """Sorted spectrum of one matrix plus the context that produced it."""

    eigenvalues: np.ndarray      # ascending, length n
    n: int
    scaling_tag: str = ""
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BinnedDensity:
    """Histogram of a spectrum, normalized against the full sample size
    so that sum(width * density) equals kept/total."""

    bin_left: np.ndarray
    bin_right: np.ndarray
    count: np.ndarray
    density: np.ndarray
    kept: int
    total: int


def eigensolve(
    M: np.ndarray,
    scaling_tag: str = "",
    metadata: dict | None = None,
    check: bool = False,
) -> SpectralSample:
    """Full symmetric eigendecomposition (values only).

    With ``check`` set, eigenvectors are also computed and five evenly
    spaced eigenpairs are verified to residual 1e-8 * ||M||.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"matrix must be square, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise PreconditionError("matrix entries must be finite")
    if not np.allclose(M, M.T, rtol=1e-10, atol=1e-14):
        raise PreconditionError("matrix must be symmetric")

    n = M.shape[0]
    if check:
        lam, vec = scipy.linalg.eigh(M, check_finite=False)
        norm = max(abs(lam[0]), abs(lam[-1]), 1e-300)
        for idx in np.unique(np.linspace(0, n - 1, 5).astype(int)):
            resid = np.linalg.norm(M @ vec[:, idx] - lam[idx] * vec[:, idx])
            if resid > 1e-8 * norm:
                raise NumericError(
                    f"eigenpair {idx} residual {resid:.3e} exceeds 1e-8*||M||"
                )
    else:
        lam = scipy.linalg.eigvalsh(M, check_finite=False)
    return SpectralSample(
        eigenvalues=np.sort(lam), n=n, scaling_tag=scaling_tag,
        metadata=dict(metadata or {}),
    )


def esd_moment(s: SpectralSample, ell: int) -> float:
    """(1/n) sum lambda_k^ell, the ell-th moment of the ESD.  For a kernel
    sample this equals the averaged ell-step return probability."""
    if ell < 0:
        raise PreconditionError(f"moment order must be >= 0, got {ell}")
    return float(np.mean(s.eigenvalues ** ell))


def stieltjes(s: SpectralSample, z: complex) -> complex:
    """Cauchy-Stieltjes transform m(z) = (1/n) sum 1/(lambda_k - z), Im z > 0."""
    z = complex(z)
    if not z.imag > 0:
        raise PreconditionError(f"z must have positive imaginary part, got {z}")
    return complex(np.mean(1.0 / (s.eigenvalues - z)))


def trim_bounds(n: int) -> tuple[int, int]:
    """One-based index range [floor(log n), floor(n - log n)] kept by the
    edge-trimming convention, clamped to [1, n]."""
    ln = math.log(n)
    lo = max(1, math.floor(ln))
    hi = min(n, math.floor(n - ln))
    return lo, max(lo, hi)


def histogram(
    s: SpectralSample, bins: int | None = None, trim: bool = False
) -> BinnedDensity:
    """Uniform-bin histogram over [min, max] of the (optionally trimmed)
    eigenvalues.  Bin count defaults to ceil(sqrt(n)).

    Trimming keeps sorted one-based indices floor(log n) through
    floor(n - log n) inclusive, discarding the extreme edges.
    """
    if bins is None:
        bins = math.ceil(math.sqrt(s.n))
    if bins < 1:
        raise PreconditionError(f"bins must be >= 1, got {bins}")

    lam = s.eigenvalues
    if trim:
        lo, hi = trim_bounds(s.n)
        lam = lam[lo - 1 : hi]
    count, edges = np.histogram(lam, bins=bins)
    width = np.diff(edges)
    density = count / (s.n * width)
    return BinnedDensity(
        bin_left=edges[:-1], bin_right=edges[1:],
        count=count.astype(int), density=density,
        kept=int(lam.size), total=s.n,
    )


def spectral_gap(s: SpectralSample) -> float:
    """1 - lambda_2 for a kernel sample (second-largest eigenvalue)."""
    if s.n < 2:
        raise PreconditionError("spectral gap needs at least two eigenvalues")
    return float(1.0 - s.eigenvalues[-2])


def schatten_check(M: np.ndarray, r: float) -> tuple[float, float, bool]:
    """Evaluate sum |lambda_k|^r against sum_i (sum_j A_ij^2)^{r/2}.

    The inequality lhs <= rhs holds for every symmetric matrix and
    0 < r <= 2, with equality at r = 2 and for diagonal matrices.
    Returns (lhs, rhs, holds) where holds allows 1e-10 relative slack.
    """
    if not 0.0 < r <= 2.0:
        raise PreconditionError(f"r must lie in (0, 2], got {r}")
    M = np.asarray(M, dtype=float)
    lam = scipy.linalg.eigvalsh(M, check_finite=False)
    lhs = float(np.sum(np.abs(lam) ** r))
    rhs = float(np.sum(np.sum(M * M, axis=1) ** (r / 2.0)))
    holds = lhs <= rhs * (1.0 + 1e-10) + 1e-300
    return lhs, rhs, holds
