"""Command-line interface: ``exphankel <command> [options]``.

Exit codes: 0 on success, 2 for invalid arguments, 3 for numerical failures.
Every command that writes to ``--out`` also writes ``run.json`` holding the
full configuration and the package version.
"""

import argparse
from dataclasses import asdict
import csv
import json
import logging
import math
from pathlib import Path
import subprocess
import sys

import numpy as np

from . import __version__
from .altproj import AltProjConfig
from .errors import InvalidArgumentError, NumericalFailure
from .experiments import parse_weight, run_gaussian_demo, run_sweep, run_timing, run_trial
from .io import model_to_json, read_signal, write_model
from .model import TrialConfig, as_signal, half_size
from .nodes import model_from_signal
from .theory import tangent_rank_check

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def version_string():
    """Package version plus ``git describe`` output when run from a checkout."""
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{__version__}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _m_window(value):
    if value in ("4k", "full"):
        return value
    try:
        m = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("--m-window must be 4k, full or an integer") from None
    if m < 2:
        raise argparse.ArgumentTypeError("--m-window must be >= 2")
    return m


def _float(value):
    if value.lower() in ("inf", "+inf"):
        return math.inf
    return float(value)


def _int_list(text):
    out = []
    for part in text.split(","):
        if ":" in part:
            a, b = part.split(":", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="half size N; signals have length 2N-1 (default 256)")
    common.add_argument("--k", type=int, help="number of exponentials (default 10)")
    common.add_argument("--snr", type=_float, help="SNR in dB, or inf (default 10)")
    common.add_argument("--seed", type=int, help="base seed (default 0)")
    common.add_argument("--trials", type=int, default=None, help="trials per point")
    common.add_argument("--methods", help="comma list of altproj,music,esprit")
    common.add_argument("--m-window", type=_m_window, help="baseline window: 4k, full or an integer")
    common.add_argument("--weight", help="uniform or gaussian:<alpha>")
    common.add_argument("--tol", type=float, help="relative stopping tolerance")
    common.add_argument("--max-iters", type=int, help="iteration cap")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", type=Path, help="JSON file with defaults for the flags above")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="exphankel", description="Exponential-sum fitting by alternating projections.")
    p.add_argument("--version", action="version", version=version_string())
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("trial", parents=[common], help="one seeded trial of each method")
    sw = sub.add_parser("sweep", parents=[common], help="dB-averaged errors over k or SNR")
    sw.add_argument("--axis", choices=("k", "snr"), default="k")
    sw.add_argument("--values", default="1:30", help="e.g. 1:30 or 0,10,20,30")
    sw.add_argument("--both-windows", action="store_true", help="run baselines with M=4k and M=N")
    g = sub.add_parser("gaussian-demo", parents=[common], help="Gaussian-atom approximation")
    g.add_argument("--alpha", type=float, default=20.0)
    g.add_argument("--atoms", type=int, default=10)
    t = sub.add_parser("timing", parents=[common], help="wall times and iteration ratios")
    t.add_argument("--sizes", default="256,1024,4096", help="comma list of N")
    th = sub.add_parser("theory-check", parents=[common], help="tangent-rank checks")
    th.add_argument("--max-n", type=int, default=6)
    f = sub.add_parser("fit", parents=[common], help="fit a model to a signal file")
    f.add_argument("signal", type=Path)
    f.add_argument("--model", dest="model_out", type=Path, help="write the fitted model JSON here")
    return p


_CONFIG_KEYS = {"n", "k", "snr", "seed", "trials", "methods", "m_window", "weight", "tol", "max_iters", "format"}


def _apply_config_file(args):
    if args.config is None:
        return
    try:
        data = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS - {"m-window", "max-iters"}
    if unknown:
        raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None:
            if attr == "methods" and isinstance(value, list):
                value = ",".join(value)
            if attr == "snr" and isinstance(value, str):
                value = _float(value)
            setattr(args, attr, value)


def _trial_config(args):
    defaults = TrialConfig()
    methods = tuple(m.strip() for m in args.methods.split(",")) if args.methods else defaults.methods
    cfg = TrialConfig(
        n=args.n if args.n is not None else defaults.n,
        k=args.k if args.k is not None else defaults.k,
        snr_db=args.snr if args.snr is not None else defaults.snr_db,
        seed=args.seed if args.seed is not None else defaults.seed,
        methods=methods,
        m_window=args.m_window if args.m_window is not None else defaults.m_window,
        weight=args.weight or defaults.weight,
        tol=args.tol,
        max_iters=args.max_iters if args.max_iters is not None else defaults.max_iters,
    )
    if cfg.max_iters < 1:
        raise InvalidArgumentError("--max-iters must be >= 1")
    if cfg.tol is not None and not cfg.tol > 0:
        raise InvalidArgumentError("--tol must be positive")
    parse_weight(cfg.weight, cfg.n)
    return cfg


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _emit(args, name, payload, csv_writer=None):
    """Print ``payload`` as JSON, or write it plus the sidecar under ``--out``."""
    text = json.dumps(_jsonable(payload), indent=1)
    if args.out is None:
        print(text)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv" and csv_writer is not None:
        csv_writer(args.out / f"{name}.csv")
    else:
        (args.out / f"{name}.json").write_text(text)
    sidecar = {
        "command": args.command,
        "version": version_string(),
        "config": {k: v for k, v in vars(args).items() if k not in ("func",)},
    }
    (args.out / "run.json").write_text(json.dumps(_jsonable(
        {**sidecar, "config": {k: str(v) if isinstance(v, Path) else v for k, v in sidecar["config"].items()}}
    ), indent=1))


def _trial_rows(result):
    for method, r in result.methods.items():
        yield {"seed": result.seed, "method": method, **asdict(r)}


def _write_rows(path, rows):
    rows = list(rows)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def cmd_trial(args):
    cfg = _trial_config(args)
    trials = args.trials or 1
    results = []
    for t in range(trials):
        c = TrialConfig(**{**asdict(cfg), "seed": cfg.seed + t})
        results.append(run_trial(c))
    payload = [{"seed": r.seed, "config": r.config, "methods": {m: asdict(x) for m, x in r.methods.items()}}
               for r in results]
    _emit(args, "trial", payload, lambda p: _write_rows(p, (row for r in results for row in _trial_rows(r))))


def cmd_sweep(args):
    cfg = _trial_config(args)
    axis = "snr_db" if args.axis == "snr" else "k"
    values = [float(v) for v in args.values.split(",")] if axis == "snr_db" and ":" not in args.values \
        else _int_list(args.values)
    windows = ["4k", "full"] if args.both_windows else None
    res = run_sweep(axis, values, args.trials or 20, cfg, windows)
    payload = {"axis": res.axis, "values": res.values, "trials": res.trials,
               "curves": res.curves, "failures": res.failures, "trials_ok": res.ok_counts}
    _emit(args, "sweep", payload, res.to_csv)


def cmd_gaussian_demo(args):
    n = args.n or 256
    snr = args.snr if args.snr is not None else 10.0
    res = run_gaussian_demo(n=n, alpha=args.alpha, snr_db=snr, atoms=args.atoms, seed=args.seed or 0,
                            max_iters=args.max_iters or 100, tol=args.tol)
    ratio, raw_outer, raw_inner = res.endpoint_stats()
    payload = {"config": res.config, "iterations": res.iterations, "omega_error": res.omega_error,
               "scaled_max_over_median": ratio, "raw_outer_max": raw_outer, "raw_inner_median": raw_inner}
    if args.out is None:
        _emit(args, "gaussian_demo", payload)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    res.to_csv(args.out / "gaussian_demo.csv")
    _emit(args, "gaussian_summary", payload)


def cmd_timing(args):
    cfg = _trial_config(args)
    sizes = _int_list(args.sizes)
    configs = [TrialConfig(**{**asdict(cfg), "n": n}) for n in sizes]
    res = run_timing(configs, trials=args.trials or 5)
    _emit(args, "timing", res.rows, res.to_csv)


def cmd_theory_check(args):
    rng = np.random.default_rng(args.seed or 0)
    reports = []
    for n in range(2, args.max_n + 1):
        for k in range(1, n):
            r = tangent_rank_check(n, k, trials=args.trials or 3, rng=rng)
            reports.append({"n": n, "k": k, "computed_rank": r.computed_rank, "formula_rank": r.formula_rank,
                            "match": r.match, "random_ranks": r.random_ranks})
    args.format = "json"
    _emit(args, "theory_check", {"all_match": all(r["match"] for r in reports), "reports": reports})


def cmd_fit(args):
    f = as_signal(read_signal(args.signal))
    k = args.k if args.k is not None else 10
    weights = parse_weight(args.weight or "uniform", half_size(f))
    config = AltProjConfig.for_snr(k, args.snr, weights=weights, seed=args.seed or 0,
                                   max_iters=args.max_iters or 100, tol_rel=args.tol)
    model, report = model_from_signal(f, k, weights, config)
    if args.model_out is not None:
        write_model(args.model_out, model)
    payload = {"model": model_to_json(model), "iterations": report.iterations, "converged": report.converged}
    _emit(args, "fit", payload)


COMMANDS = {
    "trial": cmd_trial,
    "sweep": cmd_sweep,
    "gaussian-demo": cmd_gaussian_demo,
    "timing": cmd_timing,
    "theory-check": cmd_theory_check,
    "fit": cmd_fit,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _apply_config_file(args)
        if args.trials is not None and args.trials < 1:
            raise InvalidArgumentError("--trials must be >= 1")
        COMMANDS[args.command](args)
    except InvalidArgumentError as exc:
        print(f"exphankel: invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"exphankel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK
