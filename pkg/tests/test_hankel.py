import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_signal
from exphankel.errors import InvalidArgumentError
from exphankel.hankel import (
    HankelOperator,
    RankFactors,
    adjoint_average,
    dense_adjoint,
    materialize,
)
from exphankel.model import gaussian_weight, induced_weight, uniform_weight
from exphankel.takagi import dense_takagi


def test_matvec_small_example():
    op = HankelOperator(np.array([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(op.matvec(np.array([1.0, 0.0])), [1, 2])
    np.testing.assert_allclose(op.matvec(np.array([0.0, 1.0])), [2, 3])


@given(st.integers(1, 80), st.integers(0, 2**31))
def test_matvec_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    f = random_signal(rng, n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    op = HankelOperator(f)
    a = materialize(op)
    np.testing.assert_allclose(op.matvec(x), a @ x, atol=1e-11 * np.abs(f).sum())
    np.testing.assert_allclose(op.matvec(x, conjugate_output=True), np.conj(a @ x), atol=1e-11 * np.abs(f).sum())


def test_matvec_block_input(rng):
    f = random_signal(rng, 20)
    op = HankelOperator(f)
    x = rng.standard_normal((20, 3)) + 0j
    np.testing.assert_allclose(op.matvec(x), materialize(op) @ x, atol=1e-12)


def test_weighted_matvec_matches_dense(rng):
    n = 24
    f = random_signal(rng, n)
    w = induced_weight(rng.uniform(0.5, 2.0, n))
    op = HankelOperator(f, w)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    sw = np.sqrt(w.w)
    dense = (sw[:, None] * materialize(op) * sw[None, :]) @ x
    np.testing.assert_allclose(op.weighted_matvec(x), dense, atol=1e-11)


def test_matvec_rejects_wrong_length():
    with pytest.raises(InvalidArgumentError):
        HankelOperator(np.ones(5)).matvec(np.ones(4))


def test_materialize_guard():
    with pytest.raises(InvalidArgumentError):
        materialize(HankelOperator(np.ones(2 * 513 - 1)))


def test_adjoint_of_all_ones_matrix():
    # every anti-diagonal of the all-ones matrix averages to 1
    n = 5
    fac = RankFactors(np.array([float(n)]), np.ones((n, 1)) / np.sqrt(n))
    np.testing.assert_allclose(adjoint_average(fac, uniform_weight(n)), np.ones(2 * n - 1), atol=1e-13)


@given(st.integers(2, 32), st.integers(0, 2**31), st.booleans())
def test_factored_adjoint_matches_dense_average(n, seed, uniform):
    rng = np.random.default_rng(seed)
    w = uniform_weight(n) if uniform else induced_weight(rng.uniform(0.2, 3.0, n))
    k = min(3, n)
    u = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    fac = RankFactors(rng.uniform(0.1, 2.0, k), u)
    np.testing.assert_allclose(adjoint_average(fac, w), dense_adjoint(fac.to_dense(), w), atol=1e-10 * np.abs(u).max() ** 2 * 10)


def test_adjoint_inverts_hankel_through_takagi(rng):
    n = 16
    f = random_signal(rng, n)
    w = gaussian_weight(n, 3.0)
    s, u = dense_takagi(materialize(HankelOperator(f)))
    np.testing.assert_allclose(adjoint_average(RankFactors(s, u), w), f, atol=1e-10)


def test_direct_path_for_steep_weights(rng):
    # with omega spanning many decades the averaging must stay accurate
    # relative to each entry, not only to the largest one
    n = 64
    w = gaussian_weight(n, 60.0)
    assert w.omega.min() < 1e-8 * w.omega.max()
    f = random_signal(rng, n)
    s, u = dense_takagi(materialize(HankelOperator(f)))
    g = adjoint_average(RankFactors(s, u), w)
    np.testing.assert_allclose(g, f, rtol=1e-8, atol=1e-8)
