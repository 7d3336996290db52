"""Reproducible random streams for replicated Monte Carlo runs.

Every experiment draws from ``stream(seed, rep, role)``: a counter-based
Philox generator keyed by the run seed, the replication index, and a
role tag naming what the stream is for.  Distinct keys give statistically
independent streams, so replications can run in any order (or in
parallel) and still produce identical results, and adding a new
consumer of randomness to a replication cannot perturb existing ones.

Roles are small integer constants rather than hashed strings so the
mapping is stable across interpreter runs and versions.
"""

from __future__ import annotations

import numpy as np

# Stream roles.  Append only; renumbering breaks reproducibility.
WEIGHTS = 0      # matrix weight entries
SIGNS = 1        # Bernoulli sign flips
TREE = 2         # tree mark sampling (sub-keyed by level)
PD = 3           # Poisson-Dirichlet / point-process references
PICK = 4         # size-biased picks and other categorical draws
PROBE = 5        # residual spot checks, subsampling

DEFAULT_SEED = 7


def stream(seed: int, *key: int) -> np.random.Generator:
    """Return an independent generator for the given (seed, *key) address.

    The key tuple becomes the spawn key of a :class:`numpy.random.SeedSequence`,
    so ``stream(s, 3, WEIGHTS)`` is the same generator no matter how many
    other streams were created before it.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
