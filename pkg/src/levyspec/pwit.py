"""Truncated Poisson weighted trees and their root operators.

A realization of the infinite weighted tree is truncated to branching
width B and depth H: every vertex keeps its B smallest-mark offspring
up to generation H.  Offspring marks at a vertex are the ordered points
gamma_1 < gamma_2 < ... of a unit-rate Poisson process (cumulative sums
of i.i.d. unit exponentials), each carrying an independent sign that is
+1 with probability theta.

Three operators act on the truncated vertex set, all indexed level by
level from the root:

    T   adjacency with edge weight sign(y) |y|**(-1/alpha) on (v, vk)
    K   random-walk kernel T-row normalized by rho(v)
    S   symmetrization S(v,w) = u_vw / sqrt(rho(v) rho(w))

with rho(v) = |y_v|**(-1/alpha) + sum_k |y_vk|**(-1/alpha) (the root has
no own-edge term, leaves have no offspring term).  K and S exist only
for alpha in (0, 1), where rho stays finite in the infinite-width limit;
they are built from mark magnitudes, so signs only matter to T.  K is
stored through S: the two are similar via D^{1/2} with D = diag(rho),
share their spectrum, and have identical root moments and resolvents.

All mark powers for K/S are taken in the log domain.  At small alpha,
|y|**(-1/alpha) overflows float64 wildly, but the kernel entries
u / sqrt(rho rho') always lie in [0, 1], so only logs of the raw
quantities are ever held.

Vertices are stored level-major (breadth-first): the root is index 0
and child k of the j-th vertex of level l sits at position j*B + k of
level l+1.  Level-major storage is what lets sampling, restriction, and
the resolvent recursion run as whole-array operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
from scipy.special import gammaln, logsumexp

from .errors import NumericError, PreconditionError
from .rng import DEFAULT_SEED, TREE, stream

KINDS = ("T", "K", "S")

# Vertex budget: (B, H) pairs are rejected beyond this, since dense
# per-level arrays are held in memory.
MAX_TREE_VERTICES = 4_000_000


def vertex_count(B: int, H: int) -> int:
    """Number of vertices of the (B, H) truncation: sum of B**l, l <= H."""
    return sum(B ** level for level in range(H + 1))


@dataclass(frozen=True)
class PwitTruncation:
    """Sampled marks of a (B, H)-truncated tree.

    abs_marks[l-1] and signs[l-1] are flat length-B**l arrays for level l,
    in the level-major order described in the module docstring.
    """

    alpha: float
    theta: float
    B: int
    H: int
    abs_marks: tuple[np.ndarray, ...]
    signs: tuple[np.ndarray, ...]

    @property
    def n_vertices(self) -> int:
        return vertex_count(self.B, self.H)


def sample_tree(
    alpha: float,
    theta: float,
    B: int,
    H: int,
    rng: np.random.Generator,
    max_vertices: int = MAX_TREE_VERTICES,
) -> PwitTruncation:
    """Draw one truncated tree realization.

    Levels use independent child streams spawned from ``rng``, so two
    trees sampled from identically seeded generators share their first
    min(H1, H2) levels mark for mark: deepening a truncation refines the
    same realization instead of resampling it.
    """
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= theta <= 1.0:
        raise PreconditionError(f"theta must lie in [0, 1], got {theta}")
    if B < 1 or H < 0:
        raise PreconditionError(f"need B >= 1 and H >= 0, got B={B}, H={H}")
    nv = vertex_count(B, H)
    if nv > max_vertices:
        raise PreconditionError(
            f"(B={B}, H={H}) spans {nv} vertices, over the cap {max_vertices}"
        )

    abs_marks: list[np.ndarray] = []
    signs: list[np.ndarray] = []
    for level_rng in rng.spawn(H):
        parents = len(abs_marks[-1]) if abs_marks else 1
        gaps = level_rng.standard_exponential((parents, B))
        abs_marks.append(np.cumsum(gaps, axis=1).ravel())
        signs.append(
            np.where(level_rng.random(parents * B) < theta, 1.0, -1.0)
        )
    return PwitTruncation(
        alpha=alpha, theta=theta, B=B, H=H,
        abs_marks=tuple(abs_marks), signs=tuple(signs),
    )


def restrict_tree(
    tree: PwitTruncation, B: int | None = None, H: int | None = None
) -> PwitTruncation:
    """The (B, H) sub-truncation of an existing realization.

    Keeps the first B offspring of every vertex down to depth H.  The
    result has exactly the law of a tree sampled at the smaller size,
    which makes paired truncation-error comparisons possible on a
    single realization.
    """
    B_new = tree.B if B is None else B
    H_new = tree.H if H is None else H
    if not 1 <= B_new <= tree.B or not 0 <= H_new <= tree.H:
        raise PreconditionError(
            f"restriction (B={B_new}, H={H_new}) must fit inside "
            f"(B={tree.B}, H={tree.H})"
        )

    def cut(arr: np.ndarray, level: int) -> np.ndarray:
        shaped = arr.reshape((tree.B,) * level)
        return shaped[(slice(0, B_new),) * level].ravel().copy()

    abs_marks = tuple(
        cut(tree.abs_marks[l - 1], l) for l in range(1, H_new + 1)
    )
    signs = tuple(cut(tree.signs[l - 1], l) for l in range(1, H_new + 1))
    return PwitTruncation(
        alpha=tree.alpha, theta=tree.theta, B=B_new, H=H_new,
        abs_marks=abs_marks, signs=signs,
    )


@dataclass
class RootOperator:
    """One of the operators T, K, S on a truncated tree.

    edge_weights[l-1] holds the symmetric weight on the (parent, child)
    edges into level l.  For kind K the stored weights are those of the
    similar operator S, and log_rho records the row-sum vector needed to
    recover the walk kernel itself.  Instances are read-only after
    construction.
    """

    kind: str
    alpha: float
    B: int
    H: int
    edge_weights: tuple[np.ndarray, ...]
    log_rho: tuple[np.ndarray, ...] | None = None
    log_u: tuple[np.ndarray, ...] | None = None

    @property
    def n_vertices(self) -> int:
        return vertex_count(self.B, self.H)

    @property
    def rho(self) -> tuple[np.ndarray, ...] | None:
        """rho(v) per level; may overflow to inf at very small alpha,
        where only log_rho is meaningful."""
        if self.log_rho is None:
            return None
        with np.errstate(over="ignore"):
            return tuple(np.exp(lr) for lr in self.log_rho)

    @property
    def matrix(self) -> scipy.sparse.csr_matrix:
        """The stored symmetric sparse matrix over the vertex set."""
        rows, cols, data = [], [], []
        offset = 0
        for level in range(1, self.H + 1):
            w = self.edge_weights[level - 1]
            parent_off = offset
            offset += self.B ** (level - 1)
            child = offset + np.arange(w.size)
            parent = parent_off + np.arange(w.size) // self.B
            rows.extend((parent, child))
            cols.extend((child, parent))
            data.extend((w, w))
        n = self.n_vertices
        if not rows:
            return scipy.sparse.csr_matrix((n, n))
        return scipy.sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n, n),
        )

    def walk_matrix(self) -> scipy.sparse.csr_matrix:
        """The row-stochastic kernel itself (kinds K and S record rho)."""
        if self.log_rho is None:
            raise PreconditionError("walk kernel requires kind K or S")
        rows, cols, data = [], [], []
        offset = 0
        for level in range(1, self.H + 1):
            lu = self.log_u[level - 1]
            parent_off = offset
            offset += self.B ** (level - 1)
            child = offset + np.arange(lu.size)
            parent = parent_off + np.arange(lu.size) // self.B
            down = np.exp(lu - np.repeat(self.log_rho[level - 1], self.B))
            up = np.exp(lu - self.log_rho[level])
            rows.extend((parent, child))
            cols.extend((child, parent))
            data.extend((down, up))
        n = self.n_vertices
        if not rows:
            return scipy.sparse.csr_matrix((n, n))
        return scipy.sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n, n),
        )


def build_operator(
    tree: PwitTruncation, kind: str, alpha: float | None = None
) -> RootOperator:
    """Assemble the requested operator on a sampled truncation."""
    if kind not in KINDS:
        raise PreconditionError(f"kind must be one of {KINDS}, got {kind!r}")
    if alpha is None:
        alpha = tree.alpha
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")

    if kind == "T":
        with np.errstate(over="raise"):
            try:
                weights = tuple(
                    s * y ** (-1.0 / alpha)
                    for y, s in zip(tree.abs_marks, tree.signs)
                )
            except FloatingPointError as exc:
                raise NumericError(
                    f"T weights overflow float64 at alpha={alpha}; "
                    "use kind S or K, which work in the log domain"
                ) from exc
        return RootOperator(
            kind="T", alpha=alpha, B=tree.B, H=tree.H, edge_weights=weights
        )

    if not alpha < 1.0:
        raise PreconditionError(
            f"kind {kind} requires alpha in (0, 1), got {alpha}: "
            "rho diverges otherwise"
        )

    B, H = tree.B, tree.H
    log_u = [-np.log(y) / alpha for y in tree.abs_marks]

    # rho(v) = own-edge weight + offspring weights, accumulated from the
    # leaves up so each level's offspring sum is already available.
    log_rho: list[np.ndarray] = [None] * (H + 1)
    offspring = None
    for level in range(H, -1, -1):
        if level == 0:
            log_rho[0] = (
                offspring if offspring is not None
                else np.full(1, -np.inf)
            )
        elif level == H:
            log_rho[level] = log_u[level - 1]
        else:
            log_rho[level] = np.logaddexp(log_u[level - 1], offspring)
        if level > 0:
            offspring = logsumexp(log_u[level - 1].reshape(-1, B), axis=1)

    weights = tuple(
        np.exp(
            log_u[level - 1]
            - 0.5 * (np.repeat(log_rho[level - 1], B) + log_rho[level])
        )
        for level in range(1, H + 1)
    )
    return RootOperator(
        kind=kind, alpha=alpha, B=B, H=H,
        edge_weights=weights, log_rho=tuple(log_rho), log_u=tuple(log_u),
    )


def root_resolvent(op: RootOperator, z: complex) -> complex:
    """<delta_root, (A - z)^{-1} delta_root> for Im z > 0.

    On a tree the resolvent diagonal satisfies an exact leaf-to-root
    recursion R_v = -1 / (z + sum_c w_vc^2 R_c), which is the Schur
    elimination of the sparse system (A - zI) x = delta_root one level
    at a time.  The imaginary part of every R_v stays positive, so the
    denominators never approach zero.
    """
    z = complex(z)
    if not z.imag > 0:
        raise PreconditionError(f"z must have positive imaginary part, got {z}")
    R = np.full(op.B ** op.H, -1.0 / z, dtype=complex)
    for level in range(op.H, 0, -1):
        w = op.edge_weights[level - 1]
        pulled = (w * w * R).reshape(-1, op.B).sum(axis=1)
        R = -1.0 / (z + pulled)
    out = complex(R[0])
    if not (np.isfinite(out.real) and np.isfinite(out.imag)):
        raise NumericError(f"resolvent recursion lost precision at z={z}")
    if abs(out) > 1.0 / z.imag * (1.0 + 1e-9):
        raise NumericError(
            f"resolvent bound violated: |{out}| > 1/Im z; residual "
            f"{abs(out) - 1.0 / z.imag:.3e}"
        )
    return out


def root_moments(op: RootOperator, max_ell: int) -> np.ndarray:
    """Return probabilities p_l = <delta_root, A^l delta_root>, l = 0..max_ell.

    Computed by repeated sparse matrix-vector products.  The tree is
    bipartite by levels, so odd entries vanish exactly: odd powers move
    mass only between level parities and the root entry is written as a
    sum of products with exact zeros.
    """
    if max_ell < 0:
        raise PreconditionError(f"max_ell must be >= 0, got {max_ell}")
    A = op.matrix
    x = np.zeros(op.n_vertices)
    x[0] = 1.0
    out = np.empty(max_ell + 1)
    out[0] = 1.0
    for ell in range(1, max_ell + 1):
        x = A @ x
        out[ell] = x[0]
    return out


def discarded_mass(alpha: float, B: int) -> float:
    """Expected squared-weight mass dropped by the width truncation.

    E sum_{k > B} gamma_k^{-2/alpha} with gamma_k a Gamma(k, 1) arrival;
    the sum telescopes to Gamma(B+1-c) / ((c-1) Gamma(B)) for c = 2/alpha.
    Finite only when B >= c; the estimate motivates the default B and is
    reported with tree runs.
    """
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    c = 2.0 / alpha
    if c <= 1.0 or B <= c:
        return math.inf
    return float(math.exp(gammaln(B + 1 - c) - gammaln(B)) / (c - 1.0))


def truncation_stability(
    alpha: float,
    theta: float = 1.0,
    kind: str | None = None,
    t: float = 1.0,
    reps: int = 200,
    seed: int = DEFAULT_SEED,
    B: int = 50,
    B_small: int = 25,
    H_deep: int = 8,
    H_small: int = 6,
    B_narrow: int = 4,
    H_shallow: int = 2,
) -> dict:
    """Paired truncation-error report for Im <delta_root, R(it) delta_root>.

    Width effect: trees at (B, H_shallow) against their (B_small, .)
    restrictions.  Depth effect: trees at (B_narrow, H_deep) against
    their (., H_small) restrictions.  Restriction reuses the same
    realization, so each shift is a paired mean free of between-tree
    noise.  (B, H_deep) jointly is far past the vertex budget, which is
    why the two axes are probed separately.
    """
    if kind is None:
        kind = "S" if alpha < 1.0 else "T"
    z = complex(0.0, t)

    def paired(B_hi, H_hi, B_lo, H_lo, role_shift):
        full = np.empty(reps)
        small = np.empty(reps)
        for rep in range(reps):
            tree = sample_tree(
                alpha, theta, B_hi, H_hi, stream(seed, rep, TREE + role_shift)
            )
            full[rep] = root_resolvent(build_operator(tree, kind), z).imag
            sub = restrict_tree(tree, B=B_lo, H=H_lo)
            small[rep] = root_resolvent(build_operator(sub, kind), z).imag
        return float(full.mean()), float(np.mean(full - small))

    wide_mean, width_shift = paired(B, H_shallow, B_small, H_shallow, 0)
    deep_mean, depth_shift = paired(B_narrow, H_deep, B_narrow, H_small, 100)
    return {
        "kind": kind,
        "t": t,
        "reps": reps,
        "width_mean": wide_mean,
        "width_shift": width_shift,
        "depth_mean": deep_mean,
        "depth_shift": depth_shift,
        "discarded_mass": discarded_mass(alpha, B),
    }


def sample_pd(
    alpha: float,
    k: int,
    tail_terms: int = 100_000,
    *,
    rng: np.random.Generator,
) -> np.ndarray:
    """One draw of the first k ranked Poisson-Dirichlet coordinates.

    The full vector is gamma_j^{-1/alpha} / sum_i gamma_i^{-1/alpha} with
    gamma_j cumulative unit exponentials.  The infinite normalizing sum
    keeps ``tail_terms`` explicit terms; the remainder is approximated by
    the integral tail m^{1-1/alpha} / (1/alpha - 1) with m = tail_terms,
    using gamma_j ~ j.  The neglected error is negligible for
    alpha <= 0.9 and the command line warns above that.
    """
    return sample_pd_batch(alpha, k, 1, tail_terms, rng=rng)[0]


def sample_pd_batch(
    alpha: float,
    k: int,
    reps: int,
    tail_terms: int = 100_000,
    *,
    rng: np.random.Generator,
) -> np.ndarray:
    """A (reps, k) array of ranked Poisson-Dirichlet draws.

    Work proceeds in chunks so the exponential buffer stays near 100 MB
    regardless of the replication count.  Below alpha = 0.25 the powers
    gamma**(-1/alpha) are formed in the log domain with the leading term
    factored out, since they overflow float64 directly.
    """
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(
            f"ranked coordinates require alpha in (0, 1), got {alpha}"
        )
    if k < 1 or tail_terms < k:
        raise PreconditionError(
            f"need 1 <= k <= tail_terms, got k={k}, tail_terms={tail_terms}"
        )

    c = 1.0 / alpha
    tail = tail_terms ** (1.0 - c) / (c - 1.0)
    out = np.empty((reps, k))
    chunk = max(1, int(12_500_000 // tail_terms))
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        gamma = np.cumsum(rng.standard_exponential((b, tail_terms)), axis=1)
        if alpha >= 0.25:
            x = gamma ** -c
            total = x.sum(axis=1) + tail
            out[done : done + b] = x[:, :k] / total[:, None]
        else:
            logs = -c * np.log(gamma)
            lead = logs[:, 0]
            scaled = np.exp(logs - lead[:, None])
            total = scaled.sum(axis=1) + tail * np.exp(-lead)
            out[done : done + b] = scaled[:, :k] / total[:, None]
        done += b
    return out


def pd_point_sums(
    alpha: float,
    reps: int,
    tail_terms: int = 100_000,
    *,
    rng: np.random.Generator,
) -> np.ndarray:
    """Unnormalized sums sum_j gamma_j^{-1/alpha} (tail-corrected), whose
    Laplace transform is exp(-Gamma(1-alpha) u^alpha)."""
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"requires alpha in (0, 1), got {alpha}")
    c = 1.0 / alpha
    tail = tail_terms ** (1.0 - c) / (c - 1.0)
    out = np.empty(reps)
    chunk = max(1, int(12_500_000 // tail_terms))
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        gamma = np.cumsum(rng.standard_exponential((b, tail_terms)), axis=1)
        out[done : done + b] = (gamma ** -c).sum(axis=1) + tail
        done += b
    return out


def size_biased_pick(points, rng: np.random.Generator) -> float:
    """Pick x_i from a positive list with probability x_i / sum x_j."""
    x = np.asarray(points, dtype=float)
    if x.size == 0:
        raise PreconditionError("cannot pick from an empty list")
    if not np.isfinite(x).all() or (x <= 0).any():
        raise PreconditionError("points must be finite and positive")
    total = x.sum()
    return float(x[rng.choice(x.size, p=x / total)])
