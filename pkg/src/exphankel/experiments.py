"""Benchmark drivers: seeded trials, dB-averaged sweeps, timing, Gaussian demo.

All randomness is derived from integer seeds, so every result except wall
times is reproducible.
"""

from dataclasses import asdict, dataclass, field
import csv
import time

import numpy as np

from .altproj import AltProjConfig, alternate_project
from .baselines import esprit, root_music
from .errors import InvalidArgumentError, NumericalFailure
from .model import (
    TrialConfig,
    add_noise,
    gaussian_weight,
    random_model,
    synthesize,
    uniform_weight,
    weighted_norm,
)

__all__ = [
    "MethodResult",
    "TrialResult",
    "SweepResult",
    "TimingResult",
    "GaussianDemoResult",
    "parse_weight",
    "run_trial",
    "run_sweep",
    "run_timing",
    "run_gaussian_demo",
    "trial_seed",
    "db_mean",
]

METHODS = ("altproj", "music", "esprit")


def rel_error(g, ref):
    return float(np.linalg.norm(g - ref) / np.linalg.norm(ref))


def db_mean(errors):
    """Mean of ``20 log10(e)`` over the finite, positive errors."""
    e = np.asarray(errors, dtype=float)
    e = e[np.isfinite(e) & (e > 0)]
    if e.size == 0:
        return float("nan")
    return float(np.mean(20.0 * np.log10(e)))


def trial_seed(base_seed, *path):
    """Independent 32-bit seed for a trial addressed by ``path``."""
    ss = np.random.SeedSequence([int(base_seed), *map(int, path)])
    return int(ss.generate_state(1)[0])


def parse_weight(spec, n):
    """``"uniform"`` or ``"gaussian:<alpha>"`` to a :class:`WeightPair`."""
    if spec in (None, "uniform"):
        return uniform_weight(n)
    if isinstance(spec, str) and spec.startswith("gaussian:"):
        try:
            alpha = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidArgumentError(f"bad gaussian weight spec {spec!r}") from exc
        return gaussian_weight(n, alpha)
    raise InvalidArgumentError(f"unknown weight {spec!r}; use uniform or gaussian:<alpha>")


@dataclass
class MethodResult:
    err_vs_f: float = float("nan")
    err_vs_f0: float = float("nan")
    wall_ms: float = float("nan")
    iterations: int = None
    weighted_err_vs_f: float = None
    weighted_err_vs_f0: float = None
    time_ratio: float = None
    error: str = None

    @property
    def ok(self):
        return self.error is None


@dataclass
class TrialResult:
    seed: int
    config: dict
    methods: dict = field(default_factory=dict)

    def errors(self, key="err_vs_f0"):
        return {m: getattr(r, key) for m, r in self.methods.items()}


def run_trial(config, windows=None):
    """One seeded trial of every requested method.

    Baselines are run once per covariance window in ``windows`` (default:
    the config's own window); with several windows the result keys become
    ``"music@<window>"``.  A failing method is recorded with its message
    and the remaining methods still run.
    """
    rng = np.random.default_rng(config.seed)
    model = random_model(config.k, config.n, rng)
    f0 = synthesize(model, config.length)
    f = add_noise(f0, config.snr_db, rng)
    weights = parse_weight(config.weight, config.n)
    windows = [config.m_window] if windows is None else list(windows)
    out = TrialResult(seed=config.seed, config=asdict(config))

    for method in config.methods:
        if method == "altproj":
            out.methods["altproj"] = _run_altproj(f, f0, weights, config)
            continue
        for window in windows:
            key = method if len(windows) == 1 else f"{method}@{window}"
            cfg = TrialConfig(**{**asdict(config), "m_window": window})
            out.methods[key] = _run_baseline(method, f, f0, cfg.k, cfg.window_size())
    return out


def _run_altproj(f, f0, weights, config):
    res = MethodResult()
    acfg = AltProjConfig.for_snr(
        config.k, config.snr_db, weights=weights, seed=config.seed,
        max_iters=config.max_iters, tol_rel=config.tol,
    )
    t0 = time.perf_counter()
    try:
        report = alternate_project(f, acfg)
    except (NumericalFailure, InvalidArgumentError) as exc:
        res.error = f"{type(exc).__name__}: {exc}"
        return res
    res.wall_ms = 1e3 * (time.perf_counter() - t0)
    g = report.f_inf
    res.err_vs_f, res.err_vs_f0 = rel_error(g, f), rel_error(g, f0)
    res.iterations = report.iterations
    res.time_ratio = report.total_time / report.first_iteration_time
    if not weights.is_uniform:
        om = weights.omega
        res.weighted_err_vs_f = weighted_norm(g - f, om) / weighted_norm(f, om)
        res.weighted_err_vs_f0 = weighted_norm(g - f0, om) / weighted_norm(f0, om)
    return res


def _run_baseline(method, f, f0, k, m):
    res = MethodResult()
    fn = root_music if method == "music" else esprit
    t0 = time.perf_counter()
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            model = fn(f, k, m)
            g = synthesize(model, f.size)
    except (NumericalFailure, InvalidArgumentError, np.linalg.LinAlgError) as exc:
        res.error = f"{type(exc).__name__}: {exc}"
        return res
    res.wall_ms = 1e3 * (time.perf_counter() - t0)
    if not np.all(np.isfinite(g)):
        res.error = "non-finite reconstruction"
        return res
    res.err_vs_f, res.err_vs_f0 = rel_error(g, f), rel_error(g, f0)
    return res


@dataclass
class SweepResult:
    """dB-averaged errors per axis value and method.

    ``curves[method][key]`` is a list aligned with ``values`` where ``key``
    is ``"err_vs_f"`` or ``"err_vs_f0"``; ``failures[method]`` counts the
    failed trials per axis value (excluded from the averages).
    """

    axis: str
    values: list
    trials: int
    curves: dict
    failures: dict
    ok_counts: dict

    def rows(self):
        for i, v in enumerate(self.values):
            for method in self.curves:
                yield {
                    "axis": self.axis,
                    "value": v,
                    "method": method,
                    "err_vs_f_db": self.curves[method]["err_vs_f"][i],
                    "err_vs_f0_db": self.curves[method]["err_vs_f0"][i],
                    "trials_ok": self.ok_counts[method][i],
                    "failures": self.failures[method][i],
                }

    def to_csv(self, path):
        rows = list(self.rows())
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)


SWEEP_AXES = ("k", "snr_db", "n")


def run_sweep(axis, values, trials, base_config, windows=None):
    """Run ``trials`` independent trials per axis value and average in dB."""
    if axis not in SWEEP_AXES:
        raise InvalidArgumentError(f"axis must be one of {SWEEP_AXES}")
    values = list(values)
    if not values:
        raise InvalidArgumentError("sweep axis is empty")
    if trials < 1:
        raise InvalidArgumentError("need at least one trial per point")
    collected = {}
    for i, v in enumerate(values):
        for t in range(trials):
            cfg = TrialConfig(**{**asdict(base_config), axis: v,
                                 "seed": trial_seed(base_config.seed, i, t)})
            result = run_trial(cfg, windows)
            for method, r in result.methods.items():
                slot = collected.setdefault(method, [[] for _ in values])
                slot[i].append(r)
    curves, failures, ok_counts = {}, {}, {}
    for method, per_point in collected.items():
        curves[method] = {
            key: [db_mean([getattr(r, key) for r in rs if r.ok]) for rs in per_point]
            for key in ("err_vs_f", "err_vs_f0")
        }
        failures[method] = [sum(not r.ok for r in rs) for rs in per_point]
        ok_counts[method] = [sum(r.ok for r in rs) for rs in per_point]
    return SweepResult(axis, values, trials, curves, failures, ok_counts)


@dataclass
class TimingResult:
    """Per-configuration median wall times (ms) and altproj time ratios."""

    rows: list

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(self.rows[0]))
            writer.writeheader()
            writer.writerows(self.rows)


def run_timing(configs, trials=5):
    """Median wall time per method and the altproj total/first-iteration ratio.

    Also reports the median time of a single alternating-projection
    iteration, which is the quantity that should scale like ``N log N``.
    """
    rows = []
    for base in configs:
        walls = {}
        ratios, per_iter = [], []
        for t in range(trials):
            cfg = TrialConfig(**{**asdict(base), "seed": trial_seed(base.seed, t)})
            rng = np.random.default_rng(cfg.seed)
            model = random_model(cfg.k, cfg.n, rng)
            f = add_noise(synthesize(model, cfg.length), cfg.snr_db, rng)
            for method in cfg.methods:
                t0 = time.perf_counter()
                try:
                    if method == "altproj":
                        acfg = AltProjConfig.for_snr(cfg.k, cfg.snr_db, weights=parse_weight(cfg.weight, cfg.n),
                                                     seed=cfg.seed, max_iters=cfg.max_iters, tol_rel=cfg.tol)
                        rep = alternate_project(f, acfg)
                        ratios.append(rep.total_time / rep.first_iteration_time)
                        per_iter.append(rep.total_time / rep.iterations)
                    else:
                        (root_music if method == "music" else esprit)(f, cfg.k, cfg.window_size())
                except NumericalFailure:
                    continue
                walls.setdefault(method, []).append(1e3 * (time.perf_counter() - t0))
        row = {"n": base.n, "k": base.k, "snr_db": base.snr_db, "trials": trials}
        for method in base.methods:
            row[f"{method}_ms"] = float(np.median(walls[method])) if walls.get(method) else float("nan")
        row["altproj_ratio"] = float(np.median(ratios)) if ratios else float("nan")
        row["altproj_iter_ms"] = 1e3 * float(np.median(per_iter)) if per_iter else float("nan")
        rows.append(row)
    return TimingResult(rows)


@dataclass
class GaussianDemoResult:
    """Series on the grid ``x = (l - (N - 1)) / N`` plus summary statistics.

    ``raw_error`` is the pointwise error of the exponential fit in the
    divided domain, ``g - f / sqrt(omega)``; ``scaled_error`` is that
    error times ``sqrt(omega)``, i.e. ``reconstruction - f``.
    """

    x: np.ndarray
    noisy: np.ndarray
    original: np.ndarray
    reconstruction: np.ndarray
    raw_error: np.ndarray
    scaled_error: np.ndarray
    omega_error: float
    iterations: int
    config: dict

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "noisy_re", "noisy_im", "original_re", "original_im",
                        "reconstruction_re", "reconstruction_im", "raw_error", "scaled_error"])
            for row in zip(self.x, self.noisy, self.original, self.reconstruction,
                           self.raw_error, self.scaled_error):
                x, a, b, c, e1, e2 = row
                w.writerow([x, a.real, a.imag, b.real, b.imag, c.real, c.imag, e1, e2])

    def endpoint_stats(self):
        """``(scaled max / median, raw outer-10% max, raw inner-50% median)``."""
        L = self.x.size
        raw = np.abs(self.raw_error)
        scaled = np.abs(self.scaled_error)
        outer = max(1, int(round(0.05 * L)))
        inner = slice(L // 4, L - L // 4)
        raw_outer = max(raw[:outer].max(), raw[-outer:].max())
        return float(scaled.max() / np.median(scaled)), float(raw_outer), float(np.median(raw[inner]))


def gaussian_atoms(n, alpha, atoms, rng, width=0.5):
    """Random Gaussian-atom signal ``sum c_p exp(-alpha (x - x_p)^2 + i xi_p x)``.

    Returns ``(signal, x)``.  Centers lie in ``[-width, width]``; the
    modulation frequencies keep ``|xi_p| / n <= pi / 2``.
    """
    x = (np.arange(2 * n - 1) - (n - 1)) / n
    c = rng.standard_normal(atoms) + 1j * rng.standard_normal(atoms)
    centers = rng.uniform(-width, width, atoms)
    xi = rng.uniform(-0.5 * np.pi * n, 0.5 * np.pi * n, atoms)
    f = np.zeros(x.size, dtype=complex)
    for cp, xp, xip in zip(c, centers, xi):
        f += cp * np.exp(-alpha * (x - xp) ** 2 + 1j * xip * x)
    return f, x


def run_gaussian_demo(n=256, alpha=20.0, snr_db=10.0, atoms=10, seed=0, max_iters=100, tol=None, width=0.25):
    """Fit Gaussian atoms by weighted alternating projections.

    Dividing by ``sqrt(omega)`` turns each atom into an exponential (up to
    the mismatch of the weight at the far ends); the weighted scheme fits
    ``atoms`` exponentials, and multiplying back by ``sqrt(omega)`` gives
    an approximation whose error is roughly uniform over the window.
    """
    if not (alpha > 0):
        raise InvalidArgumentError("alpha must be positive")
    rng = np.random.default_rng(seed)
    f0, x = gaussian_atoms(n, alpha, atoms, rng, width)
    f = add_noise(f0, snr_db, rng)
    weights = gaussian_weight(n, alpha)
    sq = np.sqrt(weights.omega)
    h = f / sq
    acfg = AltProjConfig.for_snr(atoms, snr_db, weights=weights, seed=seed, max_iters=max_iters, tol_rel=tol)
    report = alternate_project(h, acfg)
    g = report.f_inf
    rec = sq * g
    raw = np.abs(g - h)
    scaled = np.abs(rec - f)
    omega_error = weighted_norm(g - h, weights.omega) / weighted_norm(h, weights.omega)
    cfg = {"n": n, "alpha": alpha, "snr_db": snr_db, "atoms": atoms, "seed": seed, "width": width}
    return GaussianDemoResult(x, f, f0, rec, raw, scaled, float(omega_error), report.iterations, cfg)
