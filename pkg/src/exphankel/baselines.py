"""root-MUSIC and ESPRIT on the sample covariance matrix.

Both work with ``R = H^* H`` where ``H`` is the ``(L - M + 1) x M``
rectangular Hankel matrix of the signal.  ``R`` is Hermitian; its spectral
decomposition reuses :func:`exphankel.linalg.eigh_real` on the real
``2M x 2M`` embedding ``[[Re R, -Im R], [Im R, Re R]]``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ExtractionFailure, InvalidArgumentError
from .linalg import eigh_real, polynomial_roots
from .model import ExponentialModel, as_signal, half_size
from .nodes import NodeSet, extract_nodes_subspace, vandermonde, _column_scale

__all__ = ["CovarianceMatrix", "sample_covariance", "hermitian_eig", "root_music", "esprit"]

# Double roots on the unit circle split by O(sqrt(eps)) in floating point.
ROOT_DEDUP_TOL = 1e-6
# Candidate roots whose powers exceed exp(MAX_LOG_GROWTH) over the samples
# cannot be synthesized in double precision and are discarded.
MAX_LOG_GROWTH = 600.0


@dataclass(frozen=True)
class CovarianceMatrix:
    r: np.ndarray

    @property
    def m(self):
        return self.r.shape[0]


def _rect_hankel(f, m):
    rows = f.size - m + 1
    return f[np.arange(rows)[:, None] + np.arange(m)[None, :]]


def sample_covariance(f, m):
    """``R = H^* H`` for the rectangular Hankel matrix with ``M`` columns."""
    f = as_signal(f)
    n = half_size(f)
    if not 1 <= m <= n:
        raise InvalidArgumentError(f"window size must satisfy 1 <= M <= N = {n}")
    h = _rect_hankel(f, m)
    r = h.conj().T @ h
    return CovarianceMatrix(0.5 * (r + r.conj().T))


def hermitian_eig(r):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix."""
    r = np.asarray(r, dtype=complex)
    m = r.shape[0]
    w = np.block([[r.real, -r.imag], [r.imag, r.real]])
    d, v = eigh_real(w)
    # Every eigenvalue appears twice; [x; y] and [-y; x] represent the same
    # complex vector up to a factor i.  Take one of each pair.
    order = np.argsort(d)[::-1]
    z = v[:m, order] + 1j * v[m:, order]
    chosen = []
    basis = np.zeros((m, 0), dtype=complex)

    def residual(j):
        c = z[:, j] - basis @ (basis.conj().T @ z[:, j])
        return c, np.linalg.norm(c)

    for j in range(2 * m):
        if basis.shape[1] == m:
            break
        c, nrm = residual(j)
        if nrm > 0.5:
            basis = np.column_stack([basis, c / nrm])
            chosen.append(j)
    while basis.shape[1] < m:
        # Degenerate clusters can leave every remaining candidate half-covered.
        rest = [j for j in range(2 * m) if j not in chosen]
        j = max(rest, key=lambda i: residual(i)[1])
        c, nrm = residual(j)
        basis = np.column_stack([basis, c / nrm])
        chosen.append(j)
    vals = np.real(np.einsum("ij,ij->j", basis.conj(), r @ basis))
    idx = np.argsort(vals)[::-1]
    return vals[idx], basis[:, idx]


def _fit_normalized(f, zetas, rcond=1e-12):
    """Least-squares amplitudes on equilibrated Vandermonde columns.

    Returns ``(c, contribution)`` where ``contribution[p]`` is the 2-norm of
    the fitted term ``c[p] * exp(zeta[p] * l)`` over the samples.
    """
    v = vandermonde(zetas, f.size, normalize=True)
    cn = np.linalg.norm(v, axis=0)
    coef, *_ = scipy.linalg.lstsq(v / cn, f, cond=rcond, lapack_driver="gelsd")
    contrib = np.abs(coef)
    c = coef / cn / _column_scale(zetas, f.size)
    return c, contrib


def _dedup(roots, tol=ROOT_DEDUP_TOL):
    out = []
    for z in roots:
        if all(abs(z - w) > tol * max(1.0, abs(w)) for w in out):
            out.append(z)
    return np.array(out, dtype=complex)


def root_music(f, k, m):
    """root-MUSIC with amplitude-ranked root selection.

    The polynomial ``sum_{noise u} P_u(z) P_{conj(reverse(u))}(z)`` of degree
    ``2M - 2`` is rooted; all roots are fitted to ``f`` jointly by least
    squares and the ``k`` terms carrying the most energy are kept and
    refitted.
    """
    f = as_signal(f)
    if not k < m:
        raise InvalidArgumentError("need k < M")
    cov = sample_covariance(f, m)
    _, vecs = hermitian_eig(cov.r)
    noise = vecs[:, k:]
    poly = np.zeros(2 * m - 1, dtype=complex)
    for j in range(noise.shape[1]):
        u = noise[:, j]
        poly += np.convolve(u, u[::-1].conj())
    roots = polynomial_roots(poly)
    roots = roots[np.isfinite(roots) & (roots != 0)]
    roots = _dedup(roots)
    if roots.size < k:
        raise ExtractionFailure(f"only {roots.size} distinct roots for k = {k}")
    zetas = NodeSet.from_nodes(roots).zetas
    zetas = zetas[np.abs(zetas.real) * (f.size - 1) <= MAX_LOG_GROWTH]
    if zetas.size < k:
        raise ExtractionFailure(f"only {zetas.size} representable roots for k = {k}")
    _, contrib = _fit_normalized(f, zetas)
    keep = np.argsort(contrib)[::-1][:k]
    zsel = zetas[keep]
    c, _ = _fit_normalized(f, zsel)
    return ExponentialModel(c, zsel)


def esprit_nodes(f, k, m):
    """Nodes from the ``k``-dimensional signal subspace of the covariance."""
    f = as_signal(f)
    if not k < m:
        raise InvalidArgumentError("need k < M")
    cov = sample_covariance(f, m)
    _, vecs = hermitian_eig(cov.r)
    # Eigenvectors of H^* H span conj(Z); conjugate to get the Vandermonde span.
    return extract_nodes_subspace(vecs[:, :k].conj())


def esprit(f, k, m):
    """Least-squares ESPRIT followed by an amplitude fit over the whole signal."""
    f = as_signal(f)
    nodes = esprit_nodes(f, k, m)
    c, _ = _fit_normalized(f, nodes.zetas)
    return ExponentialModel(c, nodes.zetas)
