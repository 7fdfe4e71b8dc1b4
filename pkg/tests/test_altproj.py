import numpy as np
import pytest

from conftest import random_signal, separated_nodes
from exphankel.altproj import AltProjConfig, alternate_project, default_tolerance, estimate_rate
from exphankel.errors import InsufficientDataError, InvalidArgumentError
from exphankel.hankel import HankelOperator, materialize
from exphankel.model import ExponentialModel, add_noise, synthesize, uniform_weight, weighted_norm


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        AltProjConfig(k=0)
    with pytest.raises(InvalidArgumentError):
        AltProjConfig(k=1, tol_rel=0.0)
    assert default_tolerance(10.0) == pytest.approx(1e-2 * 10 ** -0.5)


def test_rank_k_hankel_is_a_fixed_point(rng):
    f = synthesize(ExponentialModel([1.0, 2j], [0.01 + 0.3j, -0.02 - 1.1j]), 63)
    rep = alternate_project(f, AltProjConfig(k=2))
    assert rep.iterations == 1 and rep.converged
    np.testing.assert_allclose(rep.f_inf, f, atol=1e-8 * np.abs(f).max())


def test_result_has_rank_k(rng):
    f = random_signal(rng, 32)
    rep = alternate_project(f, AltProjConfig(k=3, tol_rel=1e-10, max_iters=500))
    sv = np.linalg.svd(materialize(HankelOperator(rep.f_inf)), compute_uv=False)
    assert sv[3] < 1e-6 * sv[0]


def test_gaps_nonincreasing_and_rate(rng):
    z = separated_nodes(rng, 6, rmin=0.97)
    f0 = synthesize(ExponentialModel(rng.standard_normal(6) + 0j, np.log(z)), 127)
    f = add_noise(f0, 20.0, rng)
    rep = alternate_project(f, AltProjConfig(k=6, tol_rel=1e-9, max_iters=300))
    assert rep.converged
    gaps = np.array(rep.gap_history)
    assert np.all(np.diff(gaps) <= 1e-12 * weighted_norm(f, uniform_weight(64).omega))
    assert 0 < estimate_rate(rep) < 1


def test_iteration_cap_reports_not_converged(rng):
    f = random_signal(rng, 32)
    rep = alternate_project(f, AltProjConfig(k=2, tol_rel=1e-14, max_iters=3))
    assert rep.iterations == 3 and not rep.converged


def test_estimate_rate_needs_three_iterations(rng):
    f = synthesize(ExponentialModel([1.0], [0.1j]), 31)
    rep = alternate_project(f, AltProjConfig(k=1))
    with pytest.raises(InsufficientDataError):
        estimate_rate(rep)


def test_weight_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        alternate_project(np.ones(9), AltProjConfig(k=1, weights=uniform_weight(4)))
