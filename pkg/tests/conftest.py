import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_signal(rng, n):
    return rng.standard_normal(2 * n - 1) + 1j * rng.standard_normal(2 * n - 1)


def separated_nodes(rng, k, min_sep=0.05, rmin=0.7, rmax=1.0):
    while True:
        z = rng.uniform(rmin, rmax, k) * np.exp(1j * rng.uniform(-np.pi, np.pi, k))
        d = np.abs(z[:, None] - z[None, :]) + 9 * np.eye(k)
        if k == 1 or d.min() >= min_sep:
            return z


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the summary table."""

    def record(key, passed, detail=""):
        _CRITERIA[key] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda s: (int(s.split()[0].rstrip("abc")), s)):
        passed, detail = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")
