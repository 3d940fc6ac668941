"""Versioned JSON model files.

Floats are written with ``repr`` (shortest round-tripping decimal), keys are
sorted and nothing time-dependent is stored, so identical training runs
produce byte-identical files.
"""

import json
from dataclasses import asdict

import numpy as np

from .errors import InputError
from .io import ScalingSpec
from .models import ModelSpec
from .solver import TrainedModel

MAGIC = "smoothsvm-model"
VERSION = 1


def _floats(a):
    return None if a is None else [float(v) for v in np.asarray(a).ravel()]


def model_to_dict(model, scaling=None):
    scaling = scaling or ScalingSpec()
    return {
        "magic": MAGIC,
        "version": VERSION,
        "spec": asdict(model.spec),
        "w": _floats(model.w),
        "iterations": int(model.iterations),
        "converged": bool(model.converged),
        "final_objective": float(model.final_objective),
        "basis": None if model.basis is None
        else [_floats(row) for row in model.basis],
        "basis_labels": _floats(model.basis_labels),
        "scaling": {"mode": scaling.mode, "low": _floats(scaling.low),
                    "span": _floats(scaling.span)},
    }


def dumps(model, scaling=None):
    return json.dumps(model_to_dict(model, scaling), sort_keys=True, indent=1) + "\n"


def save(path, model, scaling=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model, scaling))


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not a model file: {exc}") from None
    if doc.get("magic") != MAGIC:
        raise InputError("not a model file (bad magic)")
    if doc.get("version") != VERSION:
        raise InputError(f"unsupported model file version {doc.get('version')!r}")
    spec = ModelSpec(**doc["spec"])
    basis = doc.get("basis")
    labels = doc.get("basis_labels")
    model = TrainedModel(
        w=np.array(doc["w"], dtype=np.float64), spec=spec,
        iterations=doc["iterations"], final_objective=doc["final_objective"],
        converged=doc["converged"],
        basis=None if basis is None else np.array(basis, dtype=np.float64),
        basis_labels=None if labels is None else np.array(labels, dtype=np.float64))
    sc = doc.get("scaling") or {"mode": "none"}
    scaling = ScalingSpec(
        sc["mode"],
        None if sc.get("low") is None else np.array(sc["low"]),
        None if sc.get("span") is None else np.array(sc["span"]))
    return model, scaling


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
