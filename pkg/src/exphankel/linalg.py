"""Dense and FFT kernels used throughout the package.

All routines are pure functions of their arguments.  They are thin, checked
wrappers around LAPACK (through numpy/scipy) and pocketfft; the checks enforce
the shapes and conditioning limits the higher-level algorithms rely on.
"""

import numpy as np
import scipy.fft
import scipy.linalg

from .errors import InvalidArgumentError, NumericalFailure, RankDeficiencyError

__all__ = [
    "fft_convolve",
    "eig_dense",
    "eigh_real",
    "lstsq",
    "polynomial_roots",
    "MAX_EIG_DENSE",
    "MAX_EIGH_REAL",
    "LSTSQ_MAX_COND",
]

MAX_EIG_DENSE = 1024
MAX_EIGH_REAL = 2048
LSTSQ_MAX_COND = 1e12


def _as_vector(x, name):
    x = np.asarray(x)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError(f"{name} contains non-finite entries")
    return x


def fft_convolve(a, b):
    """Full linear convolution of two sequences via zero-padded FFT.

    Parameters
    ----------
    a, b : array_like
        Non-empty 1-D sequences (real or complex).

    Returns
    -------
    ndarray
        ``c`` of length ``len(a) + len(b) - 1`` with
        ``c[m] = sum_{j + l = m} a[j] * b[l]``.
    """
    a = _as_vector(a, "a")
    b = _as_vector(b, "b")
    n_out = a.size + b.size - 1
    nfft = scipy.fft.next_fast_len(n_out)
    real = np.isrealobj(a) and np.isrealobj(b)
    if real:
        c = scipy.fft.irfft(scipy.fft.rfft(a, nfft) * scipy.fft.rfft(b, nfft), nfft)
    else:
        c = scipy.fft.ifft(scipy.fft.fft(a, nfft) * scipy.fft.fft(b, nfft))
    return c[:n_out]


def eig_dense(m):
    """Eigenvalues and right eigenvectors of a small dense complex matrix.

    Uses LAPACK ``geev`` (Hessenberg reduction followed by shifted QR).
    Eigenvalues are returned in no particular order; eigenvectors are the
    columns of the second output, normalized to unit 2-norm.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidArgumentError("eig_dense expects a non-empty square matrix")
    if m.shape[0] > MAX_EIG_DENSE:
        raise InvalidArgumentError(f"matrix too large for dense solver (n > {MAX_EIG_DENSE})")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError("matrix contains non-finite entries")
    try:
        vals, vecs = scipy.linalg.eig(m.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("QR iteration did not converge", size=m.shape[0]) from exc
    return vals, vecs


def eigh_real(s):
    """Spectral decomposition of a real symmetric matrix.

    Returns
    -------
    d : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors as columns, ``s = v @ diag(d) @ v.T``.
    """
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] == 0:
        raise InvalidArgumentError("eigh_real expects a non-empty square matrix")
    if np.iscomplexobj(s):
        if np.any(s.imag != 0):
            raise InvalidArgumentError("eigh_real expects a real matrix")
        s = s.real
    if s.shape[0] > MAX_EIGH_REAL:
        raise InvalidArgumentError(f"matrix too large (n > {MAX_EIGH_REAL})")
    if not np.all(np.isfinite(s)):
        raise InvalidArgumentError("matrix contains non-finite entries")
    scale = np.max(np.abs(s))
    if np.max(np.abs(s - s.T), initial=0.0) > 1e-12 * max(scale, np.finfo(float).tiny):
        raise InvalidArgumentError("matrix is not symmetric")
    d, v = scipy.linalg.eigh(0.5 * (s + s.T))
    return d, v


def lstsq(a, b, max_cond=LSTSQ_MAX_COND):
    """Least-squares solution of ``a @ x ~= b`` by Householder QR.

    Parameters
    ----------
    a : array_like, shape (m, n)
        Full column rank, ``m >= n``.
    b : array_like, shape (m,) or (m, p)
    max_cond : float
        Largest acceptable 2-norm condition number of ``a``.

    Raises
    ------
    RankDeficiencyError
        If the condition number of ``a`` exceeds ``max_cond``.  The estimate
        is carried on the exception as ``condition``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2:
        raise InvalidArgumentError("a must be a matrix")
    m, n = a.shape
    if m < n or n == 0:
        raise InvalidArgumentError(f"need m >= n >= 1, got shape {a.shape}")
    if b.shape[0] != m:
        raise InvalidArgumentError("row count of b does not match a")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidArgumentError("non-finite entries in least-squares data")
    q, r = scipy.linalg.qr(a, mode="economic")
    sv = scipy.linalg.svdvals(r)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    if not cond < max_cond:
        raise RankDeficiencyError(
            f"least-squares matrix is ill-conditioned (cond ~ {cond:.3g})", condition=cond
        )
    return scipy.linalg.solve_triangular(r, q.conj().T @ b)


def polynomial_roots(coeffs):
    """Roots of ``sum_j coeffs[j] * z**j`` (coefficients in ascending order).

    Trailing zero coefficients are stripped (they lower the degree); the
    roots are the eigenvalues of the companion matrix of the monic
    polynomial.  Leading zero coefficients give roots at the origin.
    """
    c = _as_vector(coeffs, "coeffs").astype(complex)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise InvalidArgumentError("the zero polynomial has no well-defined roots")
    c = c[: nz[-1] + 1]
    d = c.size - 1
    if d == 0:
        return np.empty(0, dtype=complex)
    monic = c[:-1] / c[-1]
    comp = np.zeros((d, d), dtype=complex)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -monic
    vals, _ = eig_dense(comp)
    return vals
