"""Alternating projections between Hankel and rank-k matrices.

Each iteration replaces ``Hf_l`` by its best rank-``k`` approximation in the
weighted Frobenius norm (a partial Takagi factorization of the scaled
operator) and maps the result back to a signal with the weighted
anti-diagonal average, which is the orthogonal projection onto Hankel
matrices.  Nothing of size ``N x N`` is ever formed.
"""

from dataclasses import dataclass, field
import logging
import math
import time

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError
from .hankel import HankelOperator, RankFactors, adjoint_average
from .model import WeightPair, as_signal, half_size, uniform_weight, weighted_norm
from .takagi import LanczosControls, TakagiFactors, default_resolution, rank_k_project_weighted

__all__ = ["AltProjConfig", "AltProjReport", "alternate_project", "estimate_rate", "default_tolerance"]

logger = logging.getLogger(__name__)


def default_tolerance(snr_db=None):
    """Relative stopping tolerance: 100x below the relative noise level."""
    if snr_db is None or snr_db == math.inf:
        return 1e-8
    return 1e-2 * 10.0 ** (-snr_db / 20.0)


@dataclass
class AltProjConfig:
    k: int
    weights: WeightPair = None
    tol_rel: float = 1e-8
    max_iters: int = 100
    controls: LanczosControls = None
    warm_start: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError("k must be >= 1")
        if not self.tol_rel > 0:
            raise InvalidArgumentError("tol_rel must be positive")
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be >= 1")
        if self.controls is None:
            self.controls = LanczosControls(eps_l=min(self.tol_rel, 1e-6))

    @classmethod
    def for_snr(cls, k, snr_db=None, weights=None, seed=0, max_iters=100, tol_rel=None):
        """Configuration following the accuracy policy tied to the noise level."""
        tol = default_tolerance(snr_db) if tol_rel is None else tol_rel
        ctl = LanczosControls(eps_l=default_resolution(snr_db), rng=np.random.default_rng(seed))
        return cls(k=k, weights=weights, tol_rel=tol, max_iters=max_iters, controls=ctl)


@dataclass
class AltProjReport:
    """Result of :func:`alternate_project`.

    ``gap_history[l]`` is ``|f_{l+1} - f_l|_omega``; ``rank_residuals[l]`` is
    the largest residual bound among the accepted con-eigenpairs at
    iteration ``l``, relative to ``s_1``.
    """

    f_inf: np.ndarray
    iterations: int
    gap_history: list
    rank_residuals: list
    converged: bool
    factors: TakagiFactors = None
    weights: WeightPair = None
    lanczos_steps: list = field(default_factory=list)
    iteration_times: list = field(default_factory=list)
    sigmas_history: list = field(default_factory=list)

    @property
    def first_iteration_time(self):
        return self.iteration_times[0] if self.iteration_times else float("nan")

    @property
    def total_time(self):
        return float(sum(self.iteration_times))

    def factor_vectors(self):
        """Final con-eigenvectors un-scaled to the unweighted matrix coordinates."""
        return self.factors.vectors / self.weights.sqrt_w[:, None]


def _project_once(f, weights, k, controls, start):
    op = HankelOperator(f, weights)
    fac = rank_k_project_weighted(op, weights, k, controls, start=start)
    u = fac.vectors / weights.sqrt_w[:, None]
    g = adjoint_average(RankFactors(fac.sigmas, u), weights)
    return g, fac


def _warm_start(fac, rng):
    # Any vector in the span of the previous k pairs: a con-invariant start.
    coef = 1.0 + 0.1 * rng.standard_normal(fac.rank)
    return fac.vectors @ coef


def alternate_project(f, config):
    """Run the alternating projection scheme on signal ``f``.

    Stops when ``|f_{l+1} - f_l|_omega <= tol_rel * |f_0|_omega`` or after
    ``max_iters`` iterations; in the latter case ``converged`` is False and
    the last iterate is returned.
    """
    f0 = as_signal(f)
    n = half_size(f0)
    weights = config.weights if config.weights is not None else uniform_weight(n)
    if weights.n != n:
        raise InvalidArgumentError("weights do not match signal length")
    if config.k > n:
        raise InvalidArgumentError("k must not exceed N")
    ctl = config.controls
    norm0 = weighted_norm(f0, weights.omega)
    fl = f0
    gaps, resid, steps, times, sig = [], [], [], [], []
    fac = None
    converged = False
    for it in range(config.max_iters):
        t0 = time.perf_counter()
        start = _warm_start(fac, ctl.rng) if (config.warm_start and fac is not None) else None
        g, fac = _project_once(fl, weights, config.k, ctl, start)
        times.append(time.perf_counter() - t0)
        gap = weighted_norm(g - fl, weights.omega)
        gaps.append(gap)
        s1 = fac.sigmas[0] if fac.rank else 0.0
        resid.append(float(fac.bounds.max() / s1) if fac.rank and s1 > 0 else 0.0)
        steps.append(fac.steps)
        sig.append(fac.sigmas.copy())
        if len(gaps) > 1 and gaps[-1] > gaps[-2] + 1e-12 * norm0:
            logger.warning("gap increased at iteration %d: %.3e -> %.3e", it, gaps[-2], gaps[-1])
        fl = g
        if gap <= config.tol_rel * norm0:
            converged = True
            break
    return AltProjReport(
        f_inf=fl,
        iterations=len(gaps),
        gap_history=gaps,
        rank_residuals=resid,
        converged=converged,
        factors=fac,
        weights=weights,
        lanczos_steps=steps,
        iteration_times=times,
        sigmas_history=sig,
    )


def estimate_rate(report):
    """Geometric-mean contraction of successive gaps over the tail half.

    Requires at least three iterations.
    """
    gaps = np.asarray(report.gap_history, dtype=float)
    if gaps.size < 3:
        raise InsufficientDataError("need at least 3 iterations to estimate a rate")
    tail = gaps[gaps.size // 2 :] if gaps.size >= 4 else gaps
    if tail.size < 2:
        tail = gaps[-2:]
    tail = np.maximum(tail, np.finfo(float).tiny)
    ratios = tail[1:] / tail[:-1]
    c = float(np.exp(np.mean(np.log(ratios))))
    return min(c, 1.0)
