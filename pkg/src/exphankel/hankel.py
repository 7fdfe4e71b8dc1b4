"""Matrix-free Hankel operators.

Only the generator is stored.  Products with the Hankel matrix and the
weighted adjoint (anti-diagonal averaging) are computed with FFTs in
``O(N log N)`` per vector.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import InvalidArgumentError
from .model import as_signal, half_size, uniform_weight

__all__ = [
    "HankelOperator",
    "RankFactors",
    "hankel_matvec",
    "weighted_matvec",
    "adjoint_average",
    "materialize",
    "MATERIALIZE_MAX",
]

MATERIALIZE_MAX = 512
# Below this omega_min / omega_max the averaging uses direct O(N^2 k) sums.
DIRECT_RANGE = 1e-8


class HankelOperator:
    """Square Hankel matrix ``A[j, l] = f[j + l]`` with optional weights.

    The FFT of the zero-padded generator is computed once; each product
    then costs one forward and one inverse transform.
    """

    def __init__(self, generator, weights=None):
        f = as_signal(generator)
        n = half_size(f)
        if weights is None:
            weights = uniform_weight(n)
        if weights.n != n:
            raise InvalidArgumentError("weight length does not match generator")
        self.generator = f
        self.weights = weights
        self.n = n
        self._nfft = scipy.fft.next_fast_len(3 * n - 2)
        self._fhat = scipy.fft.fft(f, self._nfft)
        self._sqrt_w = weights.sqrt_w
        self.generator.setflags(write=False)

    @property
    def shape(self):
        return (self.n, self.n)

    def matvec(self, x, conjugate_output=False):
        x = np.asarray(x)
        if x.shape[0] != self.n:
            raise InvalidArgumentError(f"vector length {x.shape[0]} != {self.n}")
        xr = x[::-1]
        y = scipy.fft.ifft(self._fhat.reshape((-1,) + (1,) * (x.ndim - 1))
                           * scipy.fft.fft(xr, self._nfft, axis=0), axis=0)
        y = y[self.n - 1 : 2 * self.n - 1]
        return y.conj() if conjugate_output else y

    def weighted_matvec(self, x):
        sw = self._sqrt_w if np.ndim(x) == 1 else self._sqrt_w[:, None]
        return sw * self.matvec(sw * np.asarray(x))


def hankel_matvec(op, x, conjugate_output=False):
    """``y[j] = sum_l f[j + l] x[l]`` (optionally conjugated)."""
    return op.matvec(x, conjugate_output=conjugate_output)


def weighted_matvec(op, x):
    """Apply ``diag(sqrt(w)) @ A @ diag(sqrt(w))`` to ``x``."""
    return op.weighted_matvec(x)


@dataclass(frozen=True)
class RankFactors:
    """``M = sum_m sigmas[m] * conj(u_m) u_m^*`` with ``u_m = vectors[:, m]``."""

    sigmas: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigmas, dtype=float).reshape(-1)
        u = np.asarray(self.vectors, dtype=complex)
        if u.ndim == 1:
            u = u[:, None]
        if u.shape[1] != s.size:
            raise InvalidArgumentError("number of vectors does not match number of sigmas")
        if np.any(s < 0):
            raise InvalidArgumentError("sigmas must be nonnegative")
        object.__setattr__(self, "sigmas", s)
        object.__setattr__(self, "vectors", u)

    @property
    def rank(self):
        return self.sigmas.size

    def to_dense(self):
        u = self.vectors
        return (u.conj() * self.sigmas) @ u.conj().T


def adjoint_average(factors, weights):
    """Weighted anti-diagonal average of a factored complex symmetric matrix.

    Computes ``g[m] = (1 / omega[m]) sum_{j + l = m} w[j] M[j, l] w[l]`` for
    ``M = sum_m s_m conj(u_m) u_m^*`` without forming ``M``: each term is the
    autoconvolution of ``v_m = w * conj(u_m)``, done by FFT unless ``omega``
    spans more than ``1 / DIRECT_RANGE`` in which case it is summed directly.
    """
    u = factors.vectors
    n = weights.n
    if u.shape[0] != n:
        raise InvalidArgumentError("factor length does not match weights")
    if factors.rank == 0:
        return np.zeros(2 * n - 1, dtype=complex)
    v = weights.w[:, None] * u.conj()
    omega = weights.omega
    if omega.min() < DIRECT_RANGE * omega.max():
        # The FFT error is relative to the largest entry; with a steep weight
        # the tails would be swamped once divided by omega.
        g = np.zeros(2 * n - 1, dtype=complex)
        for s, vm in zip(factors.sigmas, v.T):
            g += s * np.convolve(vm, vm)
        return g / omega
    nfft = scipy.fft.next_fast_len(2 * n - 1)
    vhat = scipy.fft.fft(v, nfft, axis=0)
    g = scipy.fft.ifft((vhat * vhat) @ factors.sigmas.astype(complex))[: 2 * n - 1]
    return g / omega


def materialize(op):
    """Dense ``N x N`` matrix of ``op`` (oracles and small problems only)."""
    if op.n > MATERIALIZE_MAX:
        raise InvalidArgumentError(f"refusing to materialize N = {op.n} > {MATERIALIZE_MAX}")
    j = np.arange(op.n)
    return op.generator[j[:, None] + j[None, :]].copy()


def dense_adjoint(a, weights):
    """Reference weighted averaging of an explicit matrix (oracle helper)."""
    a = np.asarray(a)
    n = weights.n
    g = np.zeros(2 * n - 1, dtype=complex)
    ww = np.outer(weights.w, weights.w) * a
    for m in range(2 * n - 1):
        g[m] = np.trace(np.fliplr(ww), offset=n - 1 - m)
    return g / weights.omega
