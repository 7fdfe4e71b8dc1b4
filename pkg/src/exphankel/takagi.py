"""Partial Takagi factorization of complex symmetric operators.

A complex symmetric ``A`` (``A == A.T``) has con-eigenpairs
``A u = s conj(u)`` with ``s >= 0`` equal to its singular values, and
``A = sum_m s_m conj(u_m) u_m^*``.  The leading pairs are computed with a
Lanczos recursion adapted to the bilinear form ``q^T A q``::

    alpha_j = q_j^T A q_j
    beta_j q_{j+1} = conj(A q_j) - conj(alpha_j) q_j - beta_{j-1} q_{j-1}

which yields ``A Q_m = conj(Q_m) T_m + beta_m conj(q_{m+1}) e_m^T`` with a
complex symmetric tridiagonal ``T_m``.  Loss of orthogonality is tracked
with a simulated recursion for ``omega_{ij} = q_i^* q_j`` (partial
reorthogonalization), and ``T_m`` is factorized through the real symmetric
embedding ``[[Re T, -Im T], [-Im T, -Re T]]``.
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .errors import InvalidArgumentError, NumericalFailure
from .hankel import HankelOperator, RankFactors
from .linalg import eigh_real

__all__ = [
    "LanczosControls",
    "TridiagonalForm",
    "TakagiFactors",
    "lanczos_tridiagonalize",
    "takagi_tridiagonal",
    "partial_takagi",
    "rank_k_project_weighted",
    "default_resolution",
]

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def default_resolution(snr_db=None):
    """Con-eigenvalue resolution: 100x below the relative noise magnitude."""
    if snr_db is None or snr_db == math.inf:
        return 1e-10
    return 1e-2 * 10.0 ** (-snr_db / 20.0)


@dataclass
class LanczosControls:
    """Knobs of the Lanczos/Takagi solver.

    Attributes
    ----------
    max_steps : int or None
        Upper bound on Lanczos steps (defaults to the operator size).
    eps_l : float
        Target con-eigenvalue resolution relative to ``s_1``; also the
        ``beta_m / beta_1`` convergence threshold.
    machine_eps : float
        Unit round-off used by the orthogonality model.
    rng : numpy.random.Generator
        Source for start vectors, restarts and the simulated round-off terms.
    jump_factor : float
        A step with ``beta_m > jump_factor * beta_{m-1}`` triggers a
        convergence check.
    """

    max_steps: int = None
    eps_l: float = 1e-10
    machine_eps: float = _EPS
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    jump_factor: float = 1e3

    def __post_init__(self):
        if not 0 < self.eps_l < 1:
            raise InvalidArgumentError("eps_l must lie in (0, 1)")
        if self.max_steps is not None and self.max_steps < 1:
            raise InvalidArgumentError("max_steps must be positive")


@dataclass
class TridiagonalForm:
    """Output of :func:`lanczos_tridiagonalize`.

    ``betas[j]`` couples ``q_{j+1}`` and ``q_{j+2}`` (0-based ``j``);
    ``betas[-1]`` is the residual coupling to the next, not yet stored,
    Lanczos vector.  Restart points carry a zero coupling.
    """

    alphas: np.ndarray
    betas: np.ndarray
    basis: np.ndarray
    converged: bool = False
    reason: str = ""
    reorthogonalizations: int = 0
    discarded: np.ndarray = None

    @property
    def m(self):
        return self.alphas.size

    def matrix(self):
        t = np.diag(self.alphas.astype(complex))
        off = self.betas[:-1]
        idx = np.arange(off.size)
        t[idx, idx + 1] = off
        t[idx + 1, idx] = off
        return t


@dataclass(frozen=True)
class TakagiFactors(RankFactors):
    """Leading con-eigenpairs plus the residual bound of each pair."""

    bounds: np.ndarray = None
    steps: int = 0
    converged: bool = True
    requested: int = 0

    @property
    def count(self):
        return self.rank


def _cnormal(rng, sigma, size=None):
    # complex normal with standard deviation sigma (sigma / sqrt 2 per part)
    scale = np.asarray(sigma) / math.sqrt(2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def _random_unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


class _ConLanczos:
    """Stateful Lanczos recursion with partial reorthogonalization."""

    def __init__(self, apply_a, n, controls, q1):
        q1 = np.asarray(q1, dtype=complex)
        if q1.shape != (n,):
            raise InvalidArgumentError("start vector has the wrong length")
        nrm = np.linalg.norm(q1)
        if nrm == 0 or not np.isfinite(nrm):
            raise InvalidArgumentError("start vector must be nonzero")
        self.apply_a = apply_a
        self.n = n
        self.ctl = controls
        self.rng = controls.rng
        self.eps = controls.machine_eps
        self._cap = 16
        self._q = np.empty((n, self._cap), dtype=complex)
        self.alphas = []
        self.betas = []
        self.discarded = []
        self.q_next = q1 / nrm
        self.beta1 = 0.0
        self.anorm = 0.0
        self.omega_prev = np.zeros(0, dtype=complex)
        self.omega_cur = np.ones(1, dtype=complex)
        self.segment_start = 0
        self.reorths = 0
        self._reorth_batch = None

    @property
    def m(self):
        return len(self.alphas)

    @property
    def basis(self):
        return self._q[:, : self.m]

    def _store(self, q):
        if self.m == self._cap:
            self._cap *= 2
            grown = np.empty((self.n, self._cap), dtype=complex)
            grown[:, : self.m] = self._q[:, : self.m]
            self._q = grown
        self._q[:, self.m] = q

    def step(self):
        """Advance by one Lanczos step and report what happened."""
        eps = self.eps
        q = self.q_next
        fresh = self.m == self.segment_start  # first vector of a (re)started segment
        self._store(q)
        aq = self.apply_a(q)
        alpha = complex(q @ aq)
        r = aq.conj() - alpha.conjugate() * q
        if not fresh:
            r -= self.betas[-1] * self._q[:, self.m - 1]
        self.alphas.append(alpha)
        m = self.m  # 1-based index of q
        beta = float(np.linalg.norm(r))
        self.anorm = max(self.anorm, abs(alpha), beta)

        # Partial reorthogonalization also treats the vector that follows
        # a reorthogonalized one.
        pending = self._reorth_batch
        self._reorth_batch = None
        if pending is not None:
            r = self._orthogonalize(r, pending)
            beta = float(np.linalg.norm(r))
        if self.beta1 == 0.0 and beta > 0:
            self.beta1 = beta

        omega_new = self._update_omega(m, alpha, beta, fresh)
        if pending is not None:
            omega_new[pending] = _cnormal(self.rng, 1.5 * eps, pending.size)
        fired = False
        if np.max(np.abs(omega_new)) > math.sqrt(eps):
            fired = True
            batch = np.flatnonzero(np.abs(omega_new) > eps**0.75)
            r = self._orthogonalize(r, batch)
            beta = float(np.linalg.norm(r))
            omega_new[batch] = _cnormal(self.rng, 1.5 * eps, batch.size)
            self._reorth_batch = batch
            self.reorths += 1

        prev_beta = self.betas[-1] if self.betas else 0.0
        self.betas.append(beta)
        self.omega_prev = self.omega_cur
        self.omega_cur = np.r_[omega_new, 1.0]
        tiny = 10 * self.n * eps * max(self.anorm, np.finfo(float).tiny)
        breakdown = beta <= tiny
        if not breakdown:
            self.q_next = r / beta
        jump = prev_beta > 0 and beta > self.ctl.jump_factor * prev_beta
        return {"fired": fired, "breakdown": breakdown, "beta": beta, "jump": jump,
                "fresh": fresh, "alpha": abs(alpha)}

    def _orthogonalize(self, r, batch):
        if batch.size == 0:
            return r
        qb = self._q[:, batch]
        for _ in range(2):
            r = r - qb @ (qb.conj().T @ r)
        return r

    def _update_omega(self, m, alpha_m, beta_m, fresh):
        """Estimates of ``omega_{m+1, j} = q_{m+1}^* q_j`` for ``j = 1..m``."""
        eps = self.eps
        new = np.empty(m, dtype=complex)
        if beta_m == 0 or m == 1 or fresh:
            # Explicitly orthogonalized start: the estimate is round-off sized.
            new[: m - 1] = _cnormal(self.rng, 1.5 * eps, m - 1)
        else:
            alphas = np.asarray(self.alphas[: m - 1], dtype=complex)  # alpha_1..alpha_{m-1}
            betas = np.asarray(self.betas[: m - 1], dtype=float)  # beta_1..beta_{m-1}
            wc = self.omega_cur  # omega_{m, 1..m}
            wp = self.omega_prev  # omega_{m-1, 1..m-1}
            i = np.arange(m - 1)  # j - 1 for j = 1..m-1
            num = betas * wc[i + 1].conj() + alphas * wc[i].conj()
            num[1:] += betas[:-1] * wc[i[1:] - 1].conj()
            num -= alpha_m * wc[i] + self.betas[m - 2] * wp
            # Modeled round-off enters before the division by beta_m.
            theta = _cnormal(self.rng, 0.3 * eps * (beta_m + betas))
            new[: m - 1] = (num + theta) / beta_m
        if beta_m > 0:
            new[m - 1] = _cnormal(self.rng, 0.6 * eps * (2 * self.n + 1) * self.beta_ratio(beta_m))
        else:
            new[m - 1] = 0.0
        return new

    def beta_ratio(self, beta_m):
        b1 = self.beta1 if self.beta1 > 0 else beta_m
        return b1 / beta_m

    def restart(self):
        """Continue with a random start orthogonal to the current basis."""
        r = _random_unit(self.rng, self.n)
        qb = self.basis
        for _ in range(2):
            r = r - qb @ (qb.conj().T @ r)
        nrm = np.linalg.norm(r)
        if nrm < 1e-8:
            return False
        self.discarded.append((self.m - 1, self.betas[-1]))
        self.betas[-1] = 0.0
        self.q_next = r / nrm
        self.segment_start = self.m
        self._reorth_batch = None
        m = self.m
        self.omega_cur = np.r_[_cnormal(self.rng, 1.5 * self.eps, m), 1.0].astype(complex)
        return True

    def form(self, converged=False, reason=""):
        disc = np.array([b for _, b in self.discarded]) if self.discarded else np.zeros(0)
        return TridiagonalForm(
            alphas=np.asarray(self.alphas, dtype=complex),
            betas=np.asarray(self.betas, dtype=float),
            basis=self.basis.copy(),
            converged=converged,
            reason=reason,
            reorthogonalizations=self.reorths,
            discarded=disc,
        )

    def ritz(self):
        """Con-eigenpairs of ``T_m`` with their residual bounds."""
        alphas = np.asarray(self.alphas, dtype=complex)
        betas = np.asarray(self.betas, dtype=float)
        s, local = takagi_tridiagonal(alphas, betas[:-1], alphas.size)
        bounds = betas[-1] * np.abs(local[-1, :])
        for pos, b in self.discarded:
            bounds = bounds + b * np.abs(local[pos, :])
        return s, local, bounds


def lanczos_tridiagonalize(apply_a, n, controls, q1):
    """Reduce a complex symmetric operator to tridiagonal form.

    Parameters
    ----------
    apply_a : callable
        ``x -> A @ x`` for a complex symmetric ``A``.
    n : int
        Operator size.
    controls : LanczosControls
    q1 : array_like
        Start vector (normalized internally; must be nonzero).

    Returns
    -------
    TridiagonalForm
        Stops at ``controls.max_steps``, at ``beta_m / beta_1 < eps_l`` or on
        breakdown ``beta_m == 0``; the first two set ``converged``.
    """
    lz = _ConLanczos(apply_a, n, controls, q1)
    m_max = min(controls.max_steps or n, n)
    while True:
        info = lz.step()
        if info["breakdown"]:
            return lz.form(True, "breakdown")
        if lz.beta1 > 0 and info["beta"] / lz.beta1 < controls.eps_l:
            return lz.form(True, "small-beta")
        if lz.m >= m_max:
            return lz.form(False, "max-steps")


def takagi_tridiagonal(alphas, betas, m=None):
    """Takagi factorization of a complex symmetric tridiagonal matrix.

    Parameters
    ----------
    alphas : array_like, shape (m,)
        Diagonal (complex).
    betas : array_like, shape (m - 1,)
        Off-diagonal (real or complex); a trailing residual entry is ignored.

    Returns
    -------
    s : ndarray
        Positive con-eigenvalues, descending.
    u : ndarray, shape (m, len(s))
        Unit con-eigenvectors with ``T u = s conj(u)``.
    """
    alphas = np.asarray(alphas, dtype=complex)
    m = alphas.size if m is None else m
    betas = np.asarray(betas)[: m - 1]
    if alphas.size != m or betas.size != m - 1:
        raise InvalidArgumentError("inconsistent tridiagonal sizes")
    if not (np.all(np.isfinite(alphas)) and np.all(np.isfinite(betas))):
        raise InvalidArgumentError("tridiagonal coefficients must be finite")
    t = np.diag(alphas)
    idx = np.arange(m - 1)
    t[idx, idx + 1] = betas
    t[idx + 1, idx] = betas
    return _takagi_dense(t)


def _takagi_dense(t):
    m = t.shape[0]
    re, im = t.real, t.imag
    w = np.block([[re, -im], [-im, -re]])
    d, v = eigh_real(w)
    top = np.arange(2 * m - 1, m - 1, -1)  # m largest, descending
    d = d[top]
    v = v[:, top]
    scale = max(abs(d[0]), np.finfo(float).tiny)
    keep = d > 2 * m * _EPS * scale
    s = d[keep]
    u = v[:m, keep] + 1j * v[m:, keep]
    # Fix the sign ambiguity: largest-modulus entry gets a positive real part.
    if u.size:
        piv = np.argmax(np.abs(u), axis=0)
        sgn = np.sign(u[piv, np.arange(u.shape[1])].real)
        sgn[sgn == 0] = 1.0
        u = u * sgn
    tnorm = np.linalg.norm(t)
    res = np.linalg.norm(t @ u - u.conj() * s, axis=0) if u.size else np.zeros(0)
    if np.any(res > 1e-9 * max(tnorm, np.finfo(float).tiny)):
        raise NumericalFailure("real-embedding Takagi residual check failed", residual=res.max())
    return s, u


def partial_takagi(apply_a, n, k, controls, start=None):
    """Leading ``k`` con-eigenpairs of a complex symmetric operator.

    Lanczos steps are taken until a checkpoint (lost orthogonality with
    ``m >= k``, ``beta_m / beta_1 < eps_l``, a sudden jump in ``beta``, or
    the step cap) finds ``k`` Ritz pairs whose residual bounds
    ``beta_m |u_j(m)|`` are below ``eps_l * s_1``.  On an invariant subspace
    with too few pairs the recursion restarts from a random vector
    orthogonal to the current basis.

    Parameters
    ----------
    apply_a : callable
        ``x -> A @ x``.
    n : int
        Operator size.
    k : int
        Number of pairs wanted, ``1 <= k <= n``.
    controls : LanczosControls
    start : array_like, optional
        Start vector; random when omitted.

    Returns
    -------
    TakagiFactors
        Possibly fewer than ``k`` pairs when the operator has numerical
        rank below ``k``; ``converged`` is False if the step cap was hit.
    """
    if not 1 <= k <= n:
        raise InvalidArgumentError("need 1 <= k <= n")
    rng = controls.rng
    q1 = _random_unit(rng, n) if start is None else start
    lz = _ConLanczos(apply_a, n, controls, q1)
    m_max = min(controls.max_steps or n, n)
    eps_l = controls.eps_l
    checks = 0
    while True:
        info = lz.step()
        m = lz.m
        ratio_small = lz.beta1 > 0 and info["beta"] / lz.beta1 < eps_l
        invariant = info["breakdown"] or ratio_small
        at_cap = m >= m_max
        # Periodic safety net: every k steps once past 2k.
        periodic = m >= 2 * k and (m % k == 0)
        if not (invariant or at_cap or info["jump"] or (info["fired"] and m >= k) or periodic):
            continue
        checks += 1
        s, local, bounds = lz.ritz()
        s1 = s[0] if s.size else 0.0
        ok = bounds <= eps_l * max(s1, np.finfo(float).tiny)
        n_ok = int(np.argmin(ok)) if not ok.all() else ok.size
        if n_ok >= k:
            return _lift(lz, s[:k], local[:, :k], bounds[:k], k, True)
        if invariant and not at_cap:
            exhausted = info["fresh"] and info["breakdown"]
            if exhausted or not lz.restart():
                return _lift(lz, s[:k], local[:, :k], bounds[:k], k, True)
            continue
        if at_cap:
            if not invariant:
                logger.info("partial_takagi: step cap %d reached before convergence", m_max)
            return _lift(lz, s[:k], local[:, :k], bounds[:k], k, invariant)


def _lift(lz, s, local, bounds, k, converged):
    u = lz.basis @ local
    return TakagiFactors(
        sigmas=s, vectors=u, bounds=bounds, steps=lz.m, converged=bool(converged), requested=k
    )


def rank_k_project_weighted(f, weights, k, controls, start=None):
    """Leading ``k`` con-eigenpairs of ``diag(sqrt w) Hf diag(sqrt w)``.

    Vectors are returned in these scaled coordinates; divide by
    ``sqrt(w)`` to obtain the factors of the best rank-``k`` approximation
    of ``Hf`` in the ``w``-weighted Frobenius norm.
    """
    op = f if isinstance(f, HankelOperator) else HankelOperator(f, weights)
    return partial_takagi(op.weighted_matvec, op.n, k, controls, start=start)


def dense_takagi(a):
    """Full Takagi factorization of a small dense complex symmetric matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError("square matrix required")
    return _takagi_dense(0.5 * (a + a.T))
