import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import separated_nodes
from exphankel.baselines import esprit, esprit_nodes, hermitian_eig, root_music, sample_covariance
from exphankel.errors import InvalidArgumentError
from exphankel.model import ExponentialModel, synthesize
from exphankel.nodes import extract_nodes_subspace, match_nodes


def _rect(f, m):
    return np.array([f[i : i + m] for i in range(f.size - m + 1)])


def test_covariance_zero_and_dense(rng):
    assert np.all(sample_covariance(np.zeros(15), 4).r == 0)
    f = rng.standard_normal(31) + 1j * rng.standard_normal(31)
    h = _rect(f, 6)
    cov = sample_covariance(f, 6)
    assert h.shape == (2 * 16 - 6, 6)
    np.testing.assert_allclose(cov.r, h.conj().T @ h, atol=1e-12 * np.abs(cov.r).max())
    with pytest.raises(InvalidArgumentError):
        sample_covariance(f, 17)


@given(st.integers(0, 2**31), st.integers(2, 20))
def test_covariance_hermitian_psd(seed, m):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(41) + 1j * rng.standard_normal(41)
    r = sample_covariance(f, m).r
    np.testing.assert_array_equal(r, r.conj().T)
    assert np.linalg.eigvalsh(r).min() >= -1e-10 * np.linalg.norm(r)


def test_noiseless_covariance_has_rank_k(rng):
    z = separated_nodes(rng, 3)
    f = synthesize(ExponentialModel(np.ones(3), np.log(z)), 63)
    s = np.linalg.svd(sample_covariance(f, 10).r, compute_uv=False)
    assert s[3] / s[0] < 1e-10


@given(st.integers(0, 2**31), st.integers(1, 12))
def test_hermitian_eig_matches_numpy(seed, m):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((m, max(1, m // 2))) + 1j * rng.standard_normal((m, max(1, m // 2)))
    r = x @ x.conj().T
    d, v = hermitian_eig(r)
    np.testing.assert_allclose(d, np.linalg.eigvalsh(r)[::-1], atol=1e-10 * (1 + np.abs(d).max()))
    np.testing.assert_allclose(v.conj().T @ v, np.eye(m), atol=1e-10)
    assert np.linalg.norm(r @ v - v * d) < 1e-9 * (1 + np.abs(d).max())


def test_root_music_two_unit_modulus_nodes():
    z = np.exp(1j * np.array([0.7, -1.9]))
    f = synthesize(ExponentialModel([1.0, 0.5j], np.log(z)), 63)
    model = root_music(f, 2, 12)
    assert match_nodes(model.nodes, z)[0] < 1e-6


def test_root_music_constant_signal():
    model = root_music(np.ones(31, dtype=complex), 1, 4)
    np.testing.assert_allclose(model.nodes, [1.0], atol=1e-6)
    np.testing.assert_allclose(model.c, [1.0], atol=1e-6)


def test_esprit_three_nodes_and_shared_path(rng):
    z = np.array([0.95 * np.exp(0.3j), np.exp(1.5j), 0.9 * np.exp(-2.2j)])
    f = synthesize(ExponentialModel([1.0, 2.0, 1j], np.log(z)), 63)
    model = esprit(f, 3, 12)
    assert match_nodes(model.nodes, z)[0] < 1e-7
    _, v = hermitian_eig(sample_covariance(f, 12).r)
    np.testing.assert_allclose(
        esprit_nodes(f, 3, 12).zetas, extract_nodes_subspace(v[:, :3].conj()).zetas, atol=1e-12
    )


@pytest.mark.parametrize("method", [esprit, root_music])
def test_baselines_exact_recovery(method, rng):
    for _ in range(5):
        k = int(rng.integers(1, 9))
        z = separated_nodes(rng, k)
        f = synthesize(ExponentialModel(rng.standard_normal(k) + 1j * rng.standard_normal(k), np.log(z)), 127)
        assert match_nodes(method(f, k, max(2 * k + 2, 4 * k)).nodes, z)[0] < 1e-6


def test_window_must_exceed_k():
    with pytest.raises(InvalidArgumentError):
        esprit(np.ones(31, dtype=complex), 4, 4)
