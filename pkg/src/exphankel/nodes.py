"""Recovering frequencies and amplitudes from (near) rank-k Hankel signals."""

from dataclasses import dataclass
import itertools

import numpy as np
import scipy.linalg
import scipy.optimize

from .altproj import AltProjConfig, alternate_project
from .errors import IllPosedError, InvalidArgumentError, RankDeficiencyError
from .linalg import LSTSQ_MAX_COND, eig_dense, lstsq, polynomial_roots
from .model import ExponentialModel, as_signal, half_size, uniform_weight

__all__ = [
    "NodeSet",
    "extract_nodes_subspace",
    "extract_nodes_kernel",
    "fit_coefficients",
    "model_from_signal",
    "vandermonde",
    "match_nodes",
]

_SHIFT_MAX_COND = 1e12


def _principal_log(z):
    zeta = np.log(z.astype(complex))
    # numpy's log already returns imag in (-pi, pi]; -pi can only come from a
    # signed-zero imaginary part, fold it onto +pi.
    im = np.where(zeta.imag <= -np.pi, zeta.imag + 2 * np.pi, zeta.imag)
    return zeta.real + 1j * im


@dataclass(frozen=True)
class NodeSet:
    """Complex frequencies ``zetas`` with ``Im`` in ``(-pi, pi]`` and nodes ``exp(zetas)``."""

    zetas: np.ndarray

    @classmethod
    def from_nodes(cls, nodes):
        nodes = np.asarray(nodes, dtype=complex)
        if np.any(nodes == 0):
            raise IllPosedError("a node at the origin has no logarithm")
        return cls(_principal_log(nodes))

    @property
    def nodes(self):
        return np.exp(self.zetas)

    @property
    def k(self):
        return self.zetas.size


def extract_nodes_subspace(u):
    """Nodes from a basis of the Vandermonde column space.

    With ``U = Z G`` for the ``N x k`` Vandermonde ``Z[l, p] = z_p**l``, the
    matrix ``pinv(U[:-1]) @ U[1:]`` is similar to ``diag(z)``; its
    eigenvalues are the nodes.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim == 1:
        u = u[:, None]
    n, k = u.shape
    if n < k + 1:
        raise InvalidArgumentError("need at least k + 1 rows")
    upper, lower = u[:-1], u[1:]
    try:
        phi = lstsq(upper, lower, max_cond=_SHIFT_MAX_COND)
    except RankDeficiencyError as exc:
        raise RankDeficiencyError("shifted subspace is rank deficient", condition=exc.condition) from exc
    vals, _ = eig_dense(phi)
    return NodeSet.from_nodes(vals)


def extract_nodes_kernel(f, k):
    """Nodes as roots of the polynomial spanning the kernel of the ``(k+1)``-corner.

    Fast but numerically fragile; intended for noiseless data and
    diagnostics only.
    """
    f = np.asarray(f, dtype=complex)
    if f.size < 2 * k + 1:
        raise InvalidArgumentError("signal too short for a (k+1) x (k+1) corner")
    idx = np.arange(k + 1)
    corner = f[idx[:, None] + idx[None, :]]
    _, sv, vh = np.linalg.svd(corner)
    if k > 0 and not (sv[-1] == 0 or sv[k - 1] / sv[-1] >= 1e3):
        raise IllPosedError(
            "corner kernel is not numerically one-dimensional",
            ratio=float(sv[k - 1] / sv[-1]),
        )
    # Kernel of the corner; the corner is symmetric, so A v = 0 for v = conj(vh[-1]).
    lam = vh[-1].conj()
    return NodeSet.from_nodes(polynomial_roots(lam))


def vandermonde(zetas, length, normalize=False):
    """``V[l, p] = exp(zeta_p * l)``; optionally each column scaled to max modulus 1."""
    zetas = np.asarray(zetas, dtype=complex)
    l = np.arange(length)[:, None]
    if not normalize:
        return np.exp(l * zetas[None, :])
    peak = np.maximum(0.0, zetas.real) * (length - 1)
    return np.exp(l * zetas[None, :] - peak[None, :])


def _column_scale(zetas, length):
    return np.exp(np.maximum(0.0, np.asarray(zetas).real) * (length - 1))


def fit_coefficients(f, nodes, omega=None):
    """Amplitudes minimizing ``|diag(sqrt omega) (V c - f)|_2`` over all samples.

    Columns are equilibrated before the QR solve, so the conditioning test
    concerns the node geometry rather than the column scaling.
    """
    f = np.asarray(f, dtype=complex)
    zetas = nodes.zetas if isinstance(nodes, NodeSet) else np.asarray(nodes, dtype=complex)
    if f.size < zetas.size:
        raise InvalidArgumentError("need at least k samples")
    omega = np.ones(f.size) if omega is None else np.asarray(omega, dtype=float)
    if omega.shape != f.shape:
        raise InvalidArgumentError("weight length does not match the signal")
    sw = np.sqrt(omega)
    v = vandermonde(zetas, f.size, normalize=True) * sw[:, None]
    cn = np.linalg.norm(v, axis=0)
    if np.any(cn == 0):
        raise RankDeficiencyError("a Vandermonde column vanishes", condition=np.inf)
    c = lstsq(v / cn, sw * f, max_cond=LSTSQ_MAX_COND)
    return c / cn / _column_scale(zetas, f.size)


def model_from_signal(f, k, weights=None, config=None):
    """Fit a ``k``-term exponential model by alternating projections.

    Returns
    -------
    model : ExponentialModel
    report : AltProjReport
    """
    f = as_signal(f)
    n = half_size(f)
    weights = weights if weights is not None else uniform_weight(n)
    if config is None:
        config = AltProjConfig(k=k, weights=weights)
    elif config.weights is None:
        config.weights = weights
    report = alternate_project(f, config)
    if report.factors.rank < k:
        raise IllPosedError(f"signal has numerical rank {report.factors.rank} < k = {k}")
    # Column space of sum s conj(u) u^* in unweighted coordinates.
    basis, _ = np.linalg.qr(report.factor_vectors().conj())
    nodes = extract_nodes_subspace(basis)
    c = fit_coefficients(report.f_inf, nodes, weights.omega)
    return ExponentialModel(c, nodes.zetas), report


def match_nodes(a, b):
    """Optimal one-to-one matching distance between two node multisets.

    Returns ``(max_distance, permutation)`` where ``b[perm]`` is aligned with ``a``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise InvalidArgumentError("node sets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    if a.size <= 8:
        best, perm = np.inf, None
        for p in itertools.permutations(range(a.size)):
            d = cost[np.arange(a.size), p].max()
            if d < best:
                best, perm = d, np.array(p)
        return float(best), perm
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max()), cols
