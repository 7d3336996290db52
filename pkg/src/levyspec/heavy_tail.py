"""Heavy-tailed weight laws, their scaling sequences, and samplers.

A law in the class H_alpha has tail function G(t) = P(U > t) regularly
varying with index -alpha.  One family is built in: the inverse-power law

    U = V**(-1/alpha),  V uniform on (0, 1),

whose tail is G(t) = t**(-alpha) for t >= 1 and 1 below, so that every
scaling sequence has an exact closed form:

    a_n = n**(1/alpha)                      (max scale)
    w_n = integral of x dG on [0, a_n]      (truncated mean)
    kappa_n = n / a_n          for alpha in (1, 2)
            = n * w_n / a_n    for alpha = 1

Exactness of a_n and w_n removes slowly-varying correction terms from
every downstream tolerance, which is why this family is the default for
all experiments.

Signed entries attach an independent sign to each weight: +1 with
probability theta, -1 otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

INVERSE_POWER = "inverse_power"


@dataclass(frozen=True)
class TailLaw:
    """A heavy-tailed weight law with tail index alpha and sign weight theta.

    alpha may be any positive real; matrix experiments use (0, 2].
    theta is the probability that a signed entry is positive.
    """

    alpha: float
    theta: float = 1.0
    family: str = INVERSE_POWER

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise PreconditionError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.theta <= 1.0:
            raise PreconditionError(f"theta must lie in [0, 1], got {self.theta}")
        if self.family != INVERSE_POWER:
            raise PreconditionError(f"unknown law family {self.family!r}")


@dataclass(frozen=True)
class ScalingSequences:
    """The (a_n, w_n, kappa_n) triple at a fixed n.

    kappa is None when alpha lies outside [1, 2), where the kernel
    rescaling is not defined.
    """

    n: int
    a: float
    w: float
    kappa: float | None


def tail(law: TailLaw, t: float) -> float:
    """G(t) = P(U > t).  Equals 1 below the support point t = 1."""
    if t < 0:
        raise PreconditionError(f"t must be nonnegative, got {t}")
    if t < 1.0:
        return 1.0
    return float(t ** -law.alpha)


def quantile(law: TailLaw, u: float) -> float:
    """Generalized inverse G^{-1}(u) = inf{y : G(y) <= u} for u in (0, 1]."""
    if not 0.0 < u <= 1.0:
        raise PreconditionError(f"u must lie in (0, 1], got {u}")
    return float(u ** (-1.0 / law.alpha))


def a_n(law: TailLaw, n: int) -> float:
    """Scale of the maximum: inf{a > 0 : n G(a) <= 1}, here exactly n**(1/alpha)."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    return float(n ** (1.0 / law.alpha))


def w_n(law: TailLaw, n: int) -> float:
    """Truncated mean: integral of x dL(x) over [0, a_n].

    Closed form for the built-in family: log n at alpha = 1, otherwise
    alpha/(alpha-1) * (1 - a_n**(1-alpha)).
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    al = law.alpha
    if al == 1.0:
        return float(math.log(n))
    an = a_n(law, n)
    return float(al / (al - 1.0) * (1.0 - an ** (1.0 - al)))


def kappa_n(law: TailLaw, n: int) -> float:
    """Kernel eigenvalue scale: n/a_n for alpha in (1,2); n w_n/a_n at alpha = 1."""
    al = law.alpha
    if not 1.0 <= al < 2.0:
        raise PreconditionError(f"kappa_n requires alpha in [1, 2), got {al}")
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    base = n / a_n(law, n)
    if al == 1.0:
        return float(base * w_n(law, n))
    return float(base)


def mean(law: TailLaw) -> float:
    """E U = alpha/(alpha-1) for alpha > 1; infinite otherwise."""
    if law.alpha <= 1.0:
        return math.inf
    return law.alpha / (law.alpha - 1.0)


def kappa_eff(law: TailLaw, n: int) -> float:
    """kappa_n adjusted for the law's mean.

    The limiting kernel spectra are stated under a unit-mean weight
    normalization.  Row-stochastic kernels are invariant under dilation
    of the weights, so a law with mean m in (1, infinity) reaches the
    same limit once kappa_n is multiplied by m (alpha in (1, 2)).  At
    alpha = 1 the w_n factor inside kappa_n already tracks the diverging
    truncated mean and no correction applies.
    """
    k = kappa_n(law, n)
    if law.alpha == 1.0:
        return k
    return float(mean(law) * k)


def scaling_sequences(law: TailLaw, n: int) -> ScalingSequences:
    """Bundle (a_n, w_n, kappa_n); kappa is None outside alpha in [1, 2)."""
    kap = kappa_n(law, n) if 1.0 <= law.alpha < 2.0 else None
    return ScalingSequences(n=n, a=a_n(law, n), w=w_n(law, n), kappa=kap)


def truncated_moment(law: TailLaw, p: float, t: float) -> float:
    """E[|X|^p ; |X| <= t] = alpha/(p-alpha) * (t**(p-alpha) - 1) for t >= 1.

    Only the regime p > alpha is supported, where the moment grows like
    a power of the cutoff.
    """
    if p <= law.alpha:
        raise PreconditionError(
            f"truncated_moment requires p > alpha, got p={p}, alpha={law.alpha}"
        )
    if t < 1.0:
        raise PreconditionError(f"cutoff t must be >= 1, got {t}")
    al = law.alpha
    return float(al / (p - al) * (t ** (p - al) - 1.0))


def _sample_abs(law: TailLaw, size: int, rng: np.random.Generator) -> np.ndarray:
    # 1 - random() lies in (0, 1], keeping the quantile finite.
    v = 1.0 - rng.random(size)
    return v ** (-1.0 / law.alpha)


def _symmetrize(vals: np.ndarray, n: int) -> np.ndarray:
    m = np.zeros((n, n))
    i, j = np.triu_indices(n)
    m[i, j] = vals
    m[j, i] = vals
    return m


def sample_weights(law: TailLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric n x n matrix with i.i.d. entries from the law on and above
    the diagonal, mirrored below."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    count = n * (n + 1) // 2
    return _symmetrize(_sample_abs(law, count, rng), n)


def sample_signed(law: TailLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric n x n matrix of signed entries: |X| from the law, sign +1
    with probability theta, independently per upper-triangle entry
    (diagonal included)."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    count = n * (n + 1) // 2
    vals = _sample_abs(law, count, rng)
    signs = np.where(rng.random(count) < law.theta, 1.0, -1.0)
    return _symmetrize(vals * signs, n)


def sample_finite_variance_weights(
    n: int, rng: np.random.Generator, low: float = 0.5, high: float = 1.5
) -> np.ndarray:
    """Symmetric matrix of uniform [low, high] weights.

    Serves as the finite-variance reference ensemble (mean 1, variance
    1/12 at the defaults) for semicircle checks, where the built-in
    heavy-tailed family never has a finite second moment.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    count = n * (n + 1) // 2
    return _symmetrize(rng.uniform(low, high, count), n)
