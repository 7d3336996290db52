"""Ranked invariant-measure statistics and point-process references.

The invariant probability vector of the kernel is the normalized row-sum
vector rho_hat; sorting it descending gives rho_tilde.  Its top
coordinates converge, after scaling, to ranked points of a Poisson
process of intensity alpha x^{-alpha-1} dx built over the n(n+1)/2
independent weights:

    alpha in (0, 1):  2 * rho_tilde_1  ->  first Poisson-Dirichlet
                      coordinate, and consecutive ranked coordinates
                      pair up (rho_tilde_{2j-1} / rho_tilde_{2j} -> 1),
                      each heavy weight being counted by its row and
                      its column.
    alpha in [1, 2):  2 * kappa_{m_n} * rho_tilde_1 -> x_1, the largest
                      point, whose law is Frechet exp(-x^{-alpha});
                      m_n = n(n+1)/2 and the relevant weight scale is
                      b_n = a_{m_n}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .heavy_tail import TailLaw, a_n, kappa_eff
from .matrix_models import WeightedEnsemble


@dataclass(frozen=True)
class RankedInvariant:
    """Descending invariant vector with the alpha-appropriate scaling."""

    n: int
    rho_tilde: np.ndarray
    b_n: float
    scaled_top: np.ndarray


def ranked_stats(
    ens: WeightedEnsemble, law: TailLaw, k: int
) -> RankedInvariant:
    """Top-k ranked coordinates of the invariant vector.

    scaled_top is rho_tilde itself for alpha in (0, 1) and
    kappa_eff(m_n) * rho_tilde for alpha in [1, 2), the regime where the
    coordinates vanish at rate b_n / (n b_n / kappa).
    """
    if not 1 <= k <= ens.n:
        raise PreconditionError(f"need 1 <= k <= n, got k={k}, n={ens.n}")
    m_n = ens.n * (ens.n + 1) // 2
    top = ens.rho_ranked[:k]
    if 0.0 < law.alpha < 1.0:
        scaled = top.copy()
    elif 1.0 <= law.alpha < 2.0:
        scaled = kappa_eff(law, m_n) * top
    else:
        raise PreconditionError(
            f"ranked scaling is defined for alpha in (0, 2), got {law.alpha}"
        )
    return RankedInvariant(
        n=ens.n, rho_tilde=ens.rho_ranked, b_n=a_n(law, m_n), scaled_top=scaled
    )


def ppp_top_reference(
    alpha: float, k: int, reps: int, rng: np.random.Generator
) -> np.ndarray:
    """Monte Carlo reference: (reps, k) ranked points x_j = gamma_j^{-1/alpha}
    of the limiting Poisson process, gamma_j cumulative unit exponentials.

    x_1 is Frechet distributed with CDF exp(-x^{-alpha})."""
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    if k < 1 or reps < 1:
        raise PreconditionError(f"need k >= 1 and reps >= 1, got {k}, {reps}")
    gamma = np.cumsum(rng.standard_exponential((reps, k)), axis=1)
    return gamma ** (-1.0 / alpha)


def frechet_cdf(alpha: float, x) -> np.ndarray:
    """CDF exp(-x^{-alpha}) of the largest-point law, 0 for x <= 0."""
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-x[pos] ** -alpha)
    return out


def pairing_deviation(rho_tilde: np.ndarray, j: int) -> float:
    """|rho_tilde_{2j-1} / rho_tilde_{2j} - 1| for the j-th rank pair."""
    if j < 1 or 2 * j > rho_tilde.size:
        raise PreconditionError(f"pair index {j} out of range")
    return float(abs(rho_tilde[2 * j - 2] / rho_tilde[2 * j - 1] - 1.0))
