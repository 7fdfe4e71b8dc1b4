"""Signals, weights and exponential-sum models.

Conventions: a signal of odd length ``L = 2N - 1`` generates the ``N x N``
Hankel matrix ``A[j, l] = f[j + l]`` (0-based).  A matrix weight ``w`` of
length ``N`` induces the anti-diagonal weight ``omega = w * w`` (full
convolution) of length ``L``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidArgumentError
from .linalg import fft_convolve

__all__ = [
    "as_signal",
    "half_size",
    "WeightPair",
    "ExponentialModel",
    "TrialConfig",
    "induced_weight",
    "uniform_weight",
    "gaussian_weight",
    "gaussian_target",
    "weighted_norm",
    "synthesize",
    "add_noise",
    "random_model",
    "complex_normal",
    "DUPLICATE_NODE_TOL",
]

DUPLICATE_NODE_TOL = 1e-12
_RESAMPLE_NODE_TOL = 1e-9


def as_signal(f):
    """Validate and return ``f`` as a complex signal of odd length."""
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1 or f.size % 2 == 0:
        raise InvalidArgumentError(f"signal must be 1-D of odd length, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InvalidArgumentError("signal contains non-finite samples")
    return f


def half_size(f):
    """Size ``N`` of the square Hankel matrix generated by ``f``."""
    return (len(f) + 1) // 2


@dataclass(frozen=True)
class WeightPair:
    """Matrix weight ``w`` (length N) and induced weight ``omega`` (length 2N-1)."""

    w: np.ndarray
    omega: np.ndarray

    @property
    def n(self):
        return self.w.size

    @property
    def sqrt_w(self):
        return np.sqrt(self.w)

    @property
    def is_uniform(self):
        return bool(np.all(self.w == 1.0))


def induced_weight(w):
    """Build the :class:`WeightPair` for a positive matrix weight ``w``.

    >>> induced_weight([1, 1, 1]).omega
    array([1., 2., 3., 2., 1.])
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidArgumentError("w must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise InvalidArgumentError("weights must be finite and strictly positive")
    if np.all(w == np.round(w)) and np.max(w) ** 2 * w.size < 2**52:
        # Integer-valued weights (e.g. uniform) stay exact.
        omega = np.round(fft_convolve(w, w))
    else:
        # Direct summation of positive terms keeps full relative accuracy in
        # the tails, where an FFT would only be accurate relative to max(omega).
        omega = np.convolve(w, w)
    return WeightPair(w=w.copy(), omega=omega)


def uniform_weight(n):
    """Unit matrix weight; ``omega`` is the triangle weight."""
    return induced_weight(np.ones(n))


def _gaussian_scale(n, alpha):
    return math.sqrt((2.0 / (2 * n - 1)) * math.sqrt(8.0 * alpha / math.pi))


def gaussian_weight(n, alpha):
    """Centered Gaussian matrix weight whose ``sqrt(omega)`` approximates a Gaussian.

    ``w[j] = C * exp(-4 * alpha * m_j**2 / n**2)`` with centered index
    ``m_j = j - (n - 1) / 2`` and ``C**2 = (2 / L) * sqrt(8 * alpha / pi)``.
    Away from the two ends, ``sqrt(omega)`` then matches
    :func:`gaussian_target`, i.e. ``exp(-alpha * x**2)`` on the grid
    ``x = (l - (n - 1)) / n``.
    """
    if not (np.isfinite(alpha) and alpha > 0):
        raise InvalidArgumentError("alpha must be positive")
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    m = np.arange(n) - (n - 1) / 2.0
    w = _gaussian_scale(n, alpha) * np.exp(-4.0 * alpha * m**2 / n**2)
    # Mirror explicitly so w[j] == w[n-1-j] holds bit-for-bit.
    w = 0.5 * (w + w[::-1])
    return induced_weight(w)


def gaussian_target(n, alpha):
    """``exp(-alpha * x**2)`` on the signal grid ``x = (l - (n - 1)) / n``."""
    x = (np.arange(2 * n - 1) - (n - 1)) / n
    return np.exp(-alpha * x**2)


def weighted_norm(f, omega):
    """``sqrt(sum |f|^2 * omega)``."""
    f = np.asarray(f)
    omega = np.asarray(omega, dtype=float)
    if f.shape != omega.shape:
        raise InvalidArgumentError("signal and weight lengths differ")
    return float(np.sqrt(np.sum(np.abs(f) ** 2 * omega)))


@dataclass(frozen=True)
class ExponentialModel:
    """``f(l) = sum_p c[p] * exp(zeta[p] * l)``."""

    c: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        zeta = np.atleast_1d(np.asarray(self.zeta, dtype=complex))
        if c.ndim != 1 or c.shape != zeta.shape or c.size == 0:
            raise InvalidArgumentError("need k >= 1 amplitudes and frequencies of equal length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(zeta))):
            raise InvalidArgumentError("model parameters must be finite")
        nodes = np.exp(zeta)
        if nodes.size > 1:
            dist = np.abs(nodes[:, None] - nodes[None, :])
            dist[np.diag_indices_from(dist)] = np.inf
            if np.min(dist) <= DUPLICATE_NODE_TOL:
                raise InvalidArgumentError("duplicate nodes in exponential model")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "zeta", zeta)

    @property
    def k(self):
        return self.c.size

    @property
    def nodes(self):
        return np.exp(self.zeta)

    def __or__(self, other):
        return ExponentialModel(
            np.concatenate([self.c, other.c]), np.concatenate([self.zeta, other.zeta])
        )


@dataclass
class TrialConfig:
    """Parameters of one benchmark trial (the default benchmark protocol)."""

    n: int = 256
    k: int = 10
    snr_db: float = 10.0
    seed: int = 0
    methods: tuple = ("altproj", "music", "esprit")
    m_window: object = "4k"
    weight: str = "uniform"
    tol: float = None
    max_iters: int = 100
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError("k must be >= 1")
        if self.n < self.k + 1:
            raise InvalidArgumentError("need N >= k + 1")
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise InvalidArgumentError("snr_db must be a number (use inf for no noise)")
        self.methods = tuple(self.methods)
        bad = set(self.methods) - {"altproj", "music", "esprit"}
        if bad:
            raise InvalidArgumentError(f"unknown methods: {sorted(bad)}")

    @property
    def length(self):
        return 2 * self.n - 1

    def window_size(self):
        """Covariance window ``M`` for the baselines."""
        if self.m_window == "4k":
            m = 4 * self.k
        elif self.m_window in ("full", "N"):
            m = self.n
        else:
            m = int(self.m_window)
        return min(max(m, self.k + 1), self.n)


def synthesize(model, length):
    """Sample ``model`` at ``l = 0, ..., length - 1``."""
    if length < 1:
        raise InvalidArgumentError("length must be >= 1")
    l = np.arange(length)
    return np.exp(np.outer(l, model.zeta)) @ model.c


def complex_normal(rng, size, scale=1.0):
    """Independent standard-normal real and imaginary parts, times ``scale``."""
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def add_noise(f0, snr_db, rng):
    """Add white complex Gaussian noise at an exactly prescribed SNR.

    The noise draw is rescaled so that ``10 log10(|f0|^2 / |n|^2) == snr_db``.
    ``snr_db = inf`` returns a copy of ``f0``.
    """
    f0 = np.asarray(f0, dtype=complex)
    e0 = np.vdot(f0, f0).real
    if e0 == 0:
        raise InvalidArgumentError("cannot set an SNR relative to a zero signal")
    if snr_db == math.inf:
        return f0.copy()
    nt = complex_normal(rng, f0.shape)
    scale = math.sqrt(e0 / np.vdot(nt, nt).real * 10.0 ** (-snr_db / 10.0))
    return f0 + scale * nt


def random_model(k, n, rng):
    """Random model following the benchmark law.

    ``c ~ CN(0, 2)`` (standard normal real and imaginary parts) and
    ``zeta = (50 Z_r + i Z_i) / (4n + 1)`` with standard normal ``Z``.
    """
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    c = complex_normal(rng, k)
    zeta = np.empty(k, dtype=complex)
    for p in range(k):
        while True:
            z = (50.0 * rng.standard_normal() + 1j * rng.standard_normal()) / (4 * n + 1)
            if p == 0 or np.min(np.abs(np.exp(zeta[:p]) - np.exp(z))) > _RESAMPLE_NODE_TOL:
                zeta[p] = z
                break
    return ExponentialModel(c, zeta)
