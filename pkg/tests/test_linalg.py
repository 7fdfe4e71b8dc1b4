import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from exphankel.errors import InvalidArgumentError, RankDeficiencyError
from exphankel.linalg import eig_dense, eigh_real, fft_convolve, lstsq, polynomial_roots

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_convolve_small_example():
    np.testing.assert_allclose(fft_convolve([1, 2], [1, 3]), [1, 5, 6], atol=1e-12)


def test_convolve_with_delta_is_identity():
    a = np.array([2.0 - 1j, 0.5, 3j])
    np.testing.assert_allclose(fft_convolve(a, [1.0]), a, atol=1e-14)


@given(arrays(float, st.integers(1, 40), elements=finite), arrays(float, st.integers(1, 40), elements=finite))
def test_convolve_matches_direct_and_commutes(a, b):
    c = fft_convolve(a, b)
    scale = 1e-12 * (np.abs(a).sum() * np.abs(b).sum() + 1)
    np.testing.assert_allclose(c, np.convolve(a, b), atol=scale)
    np.testing.assert_allclose(c, fft_convolve(b, a), atol=scale)


def test_convolve_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        fft_convolve([], [1.0])


def test_eig_dense_diagonal_and_rotation():
    vals, _ = eig_dense(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(np.sort(vals.real), [1, 2, 3])
    vals, _ = eig_dense(np.array([[0.0, -1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(sorted(vals, key=lambda z: z.imag), [-1j, 1j], atol=1e-14)


def test_eig_dense_residual(rng):
    m = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    vals, vecs = eig_dense(m)
    assert np.linalg.norm(m @ vecs - vecs * vals) < 1e-10 * np.linalg.norm(m)


def test_eig_dense_size_guard():
    with pytest.raises(InvalidArgumentError):
        eig_dense(np.eye(1025))


def test_eigh_real_example():
    d, v = eigh_real(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(d, [1, 3])
    np.testing.assert_allclose(v.T @ v, np.eye(2), atol=1e-14)


def test_eigh_real_rejects_nonsymmetric():
    with pytest.raises(InvalidArgumentError):
        eigh_real(np.array([[1.0, 2.0], [0.0, 1.0]]))


@given(st.integers(1, 25), st.integers(0, 2**31))
def test_eigh_real_reconstructs(n, seed):
    r = np.random.default_rng(seed).standard_normal((n, n))
    s = r + r.T
    d, v = eigh_real(s)
    assert np.all(np.diff(d) >= 0)
    np.testing.assert_allclose(v @ np.diag(d) @ v.T, s, atol=1e-11 * (1 + np.abs(s).max()))
    np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-12)


def test_lstsq_square_and_overdetermined(rng):
    np.testing.assert_allclose(lstsq(np.eye(3), np.array([1.0, 2.0, 3.0])), [1, 2, 3])
    a = rng.standard_normal((20, 4)) + 1j * rng.standard_normal((20, 4))
    x = rng.standard_normal(4) + 0j
    np.testing.assert_allclose(lstsq(a, a @ x), x, atol=1e-12)
    b = rng.standard_normal(20)
    np.testing.assert_allclose(lstsq(a, b), np.linalg.lstsq(a, b, rcond=None)[0], atol=1e-12)


def test_lstsq_rank_deficiency():
    a = np.ones((5, 2))
    with pytest.raises(RankDeficiencyError) as info:
        lstsq(a, np.ones(5))
    assert info.value.condition > 1e12


def test_polynomial_roots_examples():
    np.testing.assert_allclose(np.sort(polynomial_roots([-1, 0, 1]).real), [-1, 1], atol=1e-14)
    np.testing.assert_allclose(polynomial_roots([1, 0, 0, 1]) ** 3, -np.ones(3), atol=1e-12)
    np.testing.assert_allclose(polynomial_roots([-2, 1]), [2], atol=1e-14)
    # a trailing zero lowers the degree
    assert polynomial_roots([-2, 1, 0]).size == 1
    with pytest.raises(InvalidArgumentError):
        polynomial_roots([0, 0])


@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_polynomial_roots_roundtrip(roots):
    roots = np.array(roots)
    d = np.abs(roots[:, None] - roots[None, :]) + 9 * np.eye(roots.size)
    if roots.size > 1 and d.min() < 0.1:
        return
    coeffs = np.poly(roots)[::-1]
    got = polynomial_roots(coeffs)
    for r in roots:
        assert np.min(np.abs(got - r)) < 1e-6
