"""Small-size numerical checks of the finite Hankel rank structure.

* a rank-``r`` Hankel generator obeys a linear recursion of length ``r``
  whose coefficients come from the upper-left ``r x r`` corner;
* the ``(k+1) x (k+1)`` corners of such a generator have kernels of
  dimension ``k + 1 - r`` (spanned by shifts of the node polynomial);
* the real-linear span of the tangent space of rank-``k`` matrices at a
  Hankel point together with all Hankel matrices has dimension
  ``2n - 1 + 2kn - k^2 - 2k``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CornerSingularError, InvalidArgumentError
from .model import as_signal

__all__ = [
    "TangentRankReport",
    "verify_recursion",
    "corner",
    "corner_kernel",
    "kernel_dimension_profile",
    "tangent_rank_formula",
    "tangent_rank_check",
    "RANK_THRESHOLD",
]

RANK_THRESHOLD = 1e-8
CORNER_MAX_COND = 1e10
TANGENT_MAX_N = 8


def corner(f, size):
    """The ``size x size`` upper-left corner ``f[j + l]`` of the Hankel matrix."""
    f = np.asarray(f, dtype=complex)
    if 2 * size - 1 > f.size:
        raise InvalidArgumentError(f"corner of size {size} needs {2 * size - 1} samples")
    idx = np.arange(size)
    return f[idx[:, None] + idx[None, :]]


def verify_recursion(f, r):
    """Recursion coefficients from the ``r x r`` corner and their residual.

    Solves ``sum_l lambda_l f(j + l) = -f(j + r)`` for ``j < r`` and
    returns ``(lambdas, residual)`` with
    ``residual = max_{k >= r} |f(k) + sum_l lambda_l f(k - r + l)|``.
    When ``r = N`` the corner equations would need ``f(2N - 1)``; all
    available equations are then solved in the minimum-norm sense and the
    residual is zero.
    """
    f = as_signal(f)
    length = f.size
    n = (length + 1) // 2
    if not 1 <= r <= n:
        raise InvalidArgumentError(f"r must satisfy 1 <= r <= N = {n}")
    ks = np.arange(r, length)
    rows = ks[:, None] - r + np.arange(r)[None, :]
    system, rhs = f[rows], -f[ks]
    if 2 * r <= length:
        a = corner(f, r)
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond >= CORNER_MAX_COND:
            raise CornerSingularError(f"{r} x {r} corner is singular", condition=float(cond))
        lam = np.linalg.solve(a, -f[r : 2 * r])
    else:
        lam = np.linalg.lstsq(system, rhs, rcond=None)[0]
    res = system @ lam - rhs
    residual = float(np.max(np.abs(res))) if res.size else 0.0
    return lam, residual


def _numerical_kernel(a, threshold=RANK_THRESHOLD):
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0:
        return vh.conj().T
    rank = int(np.sum(s > threshold * s[0]))
    return vh[rank:].conj().T


def corner_kernel(f, size, threshold=RANK_THRESHOLD):
    """Orthonormal basis of the numerical kernel of the ``size``-corner."""
    return _numerical_kernel(corner(f, size), threshold)


def kernel_dimension_profile(f, r, k_max, threshold=RANK_THRESHOLD):
    """Kernel dimensions of the ``(k+1)``-corners for ``k = r, ..., k_max``.

    For a generator of exact rank ``r`` these are ``k + 1 - r``.
    """
    f = np.asarray(f, dtype=complex)
    if k_max < r:
        raise InvalidArgumentError("need k_max >= r")
    return [corner_kernel(f, k + 1, threshold).shape[1] for k in range(r, k_max + 1)]


def tangent_rank_formula(n, k):
    return 2 * n - 1 + 2 * k * n - k * k - 2 * k


def _hankel_basis(n):
    out = []
    j = np.arange(n)
    s = j[:, None] + j[None, :]
    for m in range(2 * n - 1):
        out.append((s == m).astype(complex).ravel())
    return out


def _span_rank(u, v, threshold=RANK_THRESHOLD):
    """Complex rank of ``{X V^T + U Y^T}`` plus all Hankel matrices.

    Every generator set here is closed under multiplication by ``i``, so
    the real dimension is twice this number; the formula counts complex
    dimensions.
    """
    n, k = u.shape
    cols = _hankel_basis(n)
    for a in range(n):
        for b in range(k):
            e = np.zeros((n, k), dtype=complex)
            e[a, b] = 1.0
            cols.append((e @ v.T).ravel())
            cols.append((u @ e.T).ravel())
    m = np.column_stack(cols)
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > threshold * s[0]))


def canonical_point(n, k):
    """Factors ``(U, V)`` with ``U = [I; 0]`` and ``V[i, j] = 1`` iff ``i + j <= k - 1``.

    ``U V^T`` is then the Hankel matrix generated by ``k`` leading ones.
    """
    u = np.zeros((n, k), dtype=complex)
    u[:k, :k] = np.eye(k)
    i, j = np.meshgrid(np.arange(n), np.arange(k), indexing="ij")
    v = (i + j <= k - 1).astype(complex)
    return u, v


def random_point(n, k, rng):
    """``U = [alpha_j^i]``, ``V = U diag(c)`` so that ``U V^T = sum c_j a_j a_j^T`` is Hankel."""
    radius = rng.uniform(0.5, 1.5, k)
    alpha = radius * np.exp(2j * np.pi * rng.uniform(size=k))
    c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    u = alpha[None, :] ** np.arange(n)[:, None]
    return u, u * c[None, :]


@dataclass
class TangentRankReport:
    """Rank of the tangent-plus-Hankel span; ``match`` refers to the canonical point."""

    n: int
    k: int
    computed_rank: int
    formula_rank: int
    match: bool
    random_ranks: list = field(default_factory=list)

    @property
    def random_match_fraction(self):
        if not self.random_ranks:
            return float("nan")
        return float(np.mean([r == self.formula_rank for r in self.random_ranks]))


def tangent_rank_check(n, k, trials=0, rng=None):
    """Compare the computed span rank with ``2n - 1 + 2kn - k^2 - 2k``.

    The canonical point is always checked; ``trials`` additional random
    Hankel points of rank ``k`` are sampled from ``rng``.
    """
    if not (1 <= k < n <= TANGENT_MAX_N):
        raise InvalidArgumentError(f"need 1 <= k < n <= {TANGENT_MAX_N}")
    rng = np.random.default_rng(0) if rng is None else rng
    formula = tangent_rank_formula(n, k)
    rank = _span_rank(*canonical_point(n, k))
    randoms = [_span_rank(*random_point(n, k, rng)) for _ in range(trials)]
    return TangentRankReport(n, k, rank, formula, rank == formula, randoms)
