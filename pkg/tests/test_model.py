import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from exphankel.errors import InvalidArgumentError
from exphankel.model import (
    ExponentialModel,
    TrialConfig,
    add_noise,
    as_signal,
    gaussian_target,
    gaussian_weight,
    induced_weight,
    random_model,
    synthesize,
    uniform_weight,
    weighted_norm,
)


def test_uniform_weight_is_triangle():
    np.testing.assert_array_equal(uniform_weight(3).omega, [1, 2, 3, 2, 1])
    np.testing.assert_array_equal(uniform_weight(1).omega, [1])


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30))
def test_induced_weight_matches_direct_sum(w):
    w = np.array(w)
    np.testing.assert_allclose(induced_weight(w).omega, np.convolve(w, w), rtol=1e-12)


def test_induced_weight_rejects_nonpositive():
    with pytest.raises(InvalidArgumentError):
        induced_weight([1.0, 0.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        induced_weight([1.0, np.nan])


def test_gaussian_weight_symmetric_and_positive():
    wp = gaussian_weight(128, 50.0)
    np.testing.assert_array_equal(wp.w, wp.w[::-1])
    assert np.all(wp.omega > 0)
    with pytest.raises(InvalidArgumentError):
        gaussian_weight(16, 0.0)


def test_gaussian_weight_matches_target_in_the_middle():
    # sqrt(omega) reproduces exp(-alpha x^2) only where the truncated
    # Gaussian convolution is complete, i.e. away from the two ends.
    n, alpha = 128, 50.0
    sq = np.sqrt(gaussian_weight(n, alpha).omega)
    target = gaussian_target(n, alpha)
    mid = slice(n - 1 - n // 2, n + n // 2)
    np.testing.assert_allclose(sq[mid], target[mid], rtol=1e-2)


def test_weighted_norm_examples():
    assert weighted_norm(np.array([3.0, 4.0]), np.ones(2)) == pytest.approx(5.0)
    assert weighted_norm(np.array([1.0, 1.0, 1.0]), np.array([1.0, 2.0, 1.0])) == pytest.approx(2.0)


def test_model_validation():
    with pytest.raises(InvalidArgumentError):
        ExponentialModel([1.0, 1.0], [0.1, 0.1])
    with pytest.raises(InvalidArgumentError):
        ExponentialModel([1.0], [0.1, 0.2])
    m = ExponentialModel([1.0], [0.1]) | ExponentialModel([2.0], [0.2j])
    assert m.k == 2


def test_synthesize_examples():
    np.testing.assert_allclose(synthesize(ExponentialModel([1.0], [0.0]), 5), np.ones(5))
    z = np.log(2.0)
    np.testing.assert_allclose(synthesize(ExponentialModel([1.0], [z]), 4), [1, 2, 4, 8])


def test_add_noise_exact_snr(rng):
    f0 = rng.standard_normal(511) + 1j * rng.standard_normal(511)
    f = add_noise(f0, 10.0, rng)
    snr = 10 * math.log10(np.vdot(f0, f0).real / np.vdot(f - f0, f - f0).real)
    assert snr == pytest.approx(10.0, abs=1e-10)
    np.testing.assert_array_equal(add_noise(f0, math.inf, rng), f0)
    with pytest.raises(InvalidArgumentError):
        add_noise(np.zeros(5), 10.0, rng)


def test_random_model_is_seeded_and_follows_the_law():
    a = random_model(10, 256, np.random.default_rng(3))
    b = random_model(10, 256, np.random.default_rng(3))
    np.testing.assert_array_equal(a.zeta, b.zeta)
    z = random_model(2000, 256, np.random.default_rng(4)).zeta * (4 * 256 + 1)
    assert np.std(z.real) == pytest.approx(50.0, rel=0.1)
    assert np.std(z.imag) == pytest.approx(1.0, rel=0.1)


def test_trial_config_defaults_and_windows():
    cfg = TrialConfig()
    assert (cfg.n, cfg.k, cfg.snr_db, cfg.length) == (256, 10, 10.0, 511)
    assert cfg.window_size() == 40
    assert TrialConfig(m_window="full").window_size() == 256
    assert TrialConfig(k=100, m_window="4k").window_size() == 256
    with pytest.raises(InvalidArgumentError):
        TrialConfig(methods=("prony",))


def test_as_signal_requires_odd_length():
    with pytest.raises(InvalidArgumentError):
        as_signal(np.ones(4))
