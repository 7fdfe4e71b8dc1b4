"""Reading and writing signals and models.

Signals are CSV with header ``index,re,im`` or JSON ``[[re, im], ...]``.
Models are JSON ``[{"c": [re, im], "zeta": [re, im]}, ...]``.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .model import ExponentialModel

__all__ = ["read_signal", "write_signal", "read_model", "write_model", "model_to_json", "model_from_json"]


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def read_signal(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        try:
            arr = np.asarray(data, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"{path}: expected [[re, im], ...]") from exc
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InvalidArgumentError(f"{path}: expected [[re, im], ...]")
        return arr[:, 0] + 1j * arr[:, 1]
    rows = list(csv.DictReader(text.splitlines()))
    if not rows or not {"re", "im"} <= set(rows[0]):
        raise InvalidArgumentError(f"{path}: expected CSV columns index,re,im")
    try:
        if "index" in rows[0]:
            rows.sort(key=lambda r: int(r["index"]))
        return np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{path}: malformed number ({exc})") from None


def write_signal(path, f):
    path = Path(path)
    f = np.asarray(f, dtype=complex)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps([_pair(z) for z in f]))
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re", "im"])
        for i, z in enumerate(f):
            w.writerow([i, repr(float(z.real)), repr(float(z.imag))])


def model_to_json(model):
    return [{"c": _pair(c), "zeta": _pair(z)} for c, z in zip(model.c, model.zeta)]


def model_from_json(data):
    try:
        c = [complex(*t["c"]) for t in data]
        zeta = [complex(*t["zeta"]) for t in data]
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError("model JSON must be a list of {c: [re, im], zeta: [re, im]}") from exc
    return ExponentialModel(np.array(c), np.array(zeta))


def write_model(path, model):
    Path(path).write_text(json.dumps(model_to_json(model), indent=1))


def read_model(path):
    return model_from_json(json.loads(Path(path).read_text()))
