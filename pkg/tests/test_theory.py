import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import separated_nodes
from exphankel.errors import CornerSingularError, InvalidArgumentError
from exphankel.model import ExponentialModel, synthesize
from exphankel.theory import (
    canonical_point,
    corner_kernel,
    kernel_dimension_profile,
    tangent_rank_check,
    tangent_rank_formula,
    verify_recursion,
)


def test_recursion_two_term_model():
    z = np.exp(np.array([0.1 + 1j, -0.2 + 2j]))
    f = synthesize(ExponentialModel([1.0, 2.0], np.log(z)), 15)
    lam, res = verify_recursion(f, 2)
    assert res < 1e-9
    roots = np.roots([1, lam[1], lam[0]])
    assert np.max(np.min(np.abs(roots[:, None] - z[None, :]), axis=1)) < 1e-8


def test_recursion_geometric():
    lam, res = verify_recursion(3.0 ** np.arange(7) + 0j, 1)
    assert lam[0] == -3.0 and res == 0.0


def test_recursion_full_size_is_vacuous(rng):
    f = rng.standard_normal(15) + 1j * rng.standard_normal(15)
    _, res = verify_recursion(f, 8)
    assert res < 1e-12


def test_recursion_singular_corner():
    f = np.zeros(9, dtype=complex)
    f[4] = 1.0
    with pytest.raises(CornerSingularError):
        verify_recursion(f, 2)


@given(st.integers(1, 6), st.integers(0, 2**31))
def test_recursion_residual_property(k, seed):
    rng = np.random.default_rng(seed)
    z = separated_nodes(rng, k, min_sep=0.3)
    n = 16
    f = synthesize(ExponentialModel(rng.standard_normal(k) + 1j, np.log(z)), 2 * n - 1)
    try:
        _, res = verify_recursion(f, k)
    except CornerSingularError:
        return
    assert res < 1e-8 * np.abs(f).max()


def test_kernel_profile():
    z = np.exp(np.array([0.3j, -1.1j]))
    f = synthesize(ExponentialModel([1.0, 1.0], np.log(z)), 21)
    assert kernel_dimension_profile(f, 2, 5) == [1, 2, 3, 4]
    g = 2.0 ** np.arange(9)
    assert kernel_dimension_profile(g, 1, 1) == [1]
    v = corner_kernel(g, 2)[:, 0]
    np.testing.assert_allclose(v / v[1], [-2, 1], atol=1e-12)


def test_kernel_profile_full_rank(rng):
    f = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    assert kernel_dimension_profile(f, 2, 6) == [0] * 5


def test_canonical_point_is_hankel():
    u, v = canonical_point(5, 3)
    a = u @ v.T
    for i in range(5):
        for j in range(5):
            assert a[i, j] == (1.0 if i + j <= 2 else 0.0)


def test_tangent_rank_examples():
    rep = tangent_rank_check(3, 2)
    assert rep.computed_rank == rep.formula_rank == 9 and rep.match
    assert tangent_rank_formula(7, 1) == 4 * 7 - 4


@pytest.mark.parametrize("n,k", [(4, 2), (5, 3), (6, 3)])
def test_tangent_rank_random_points(n, k):
    rep = tangent_rank_check(n, k, trials=5, rng=np.random.default_rng(n * 10 + k))
    assert rep.random_match_fraction == 1.0


def test_tangent_rank_canonical_all_small_sizes():
    for n in range(2, 9):
        for k in range(1, n):
            assert tangent_rank_check(n, k).match, (n, k)


def test_tangent_rank_size_guard():
    with pytest.raises(InvalidArgumentError):
        tangent_rank_check(9, 2)
    with pytest.raises(InvalidArgumentError):
        tangent_rank_check(3, 3)
