"""Spectral theory of heavy-tailed reversible random kernels, at desk scale.

Three independent routes to the same limit objects, built to cross-check
one another:

- ``matrix_models`` / ``spectra``: finite-n Monte Carlo over dense
  symmetric ensembles and every spectral view of them;
- ``pwit``: the limiting weighted-tree operators, sampled directly and
  read at the root;
- ``rde``: the analytic fixed-point solver for the limit transform.

``heavy_tail`` supplies the weight laws and scaling sequences,
``invariant`` the ranked invariant-measure statistics, and ``cli`` the
``levyspec`` command line that orchestrates replicated experiments.
"""

from . import heavy_tail, invariant, matrix_models, pwit, rde, rng, spectra
from .errors import LevyspecError, NumericError, PreconditionError

__version__ = "0.1.0"

__all__ = [
    "LevyspecError",
    "NumericError",
    "PreconditionError",
    "heavy_tail",
    "invariant",
    "matrix_models",
    "pwit",
    "rde",
    "rng",
    "spectra",
    "__version__",
]
