"""Deterministic JSON reports.

Matrices are embedded as their canonical text; subspaces as the text of their
RREF basis matrix. Keys are sorted so reruns are byte-identical (the optional
elapsed_ms field is the one exception and can be switched off).
"""
from __future__ import annotations

import dataclasses
import json
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .gfmat import FieldMatrix, SubspaceBasis

SCHEMA = 1


def to_jsonable(obj):
    if isinstance(obj, FieldMatrix):
        return obj.to_text()
    if isinstance(obj, SubspaceBasis):
        return obj.matrix.to_text()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, float):
        if obj == float("inf"):
            return "inf"
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            out[f.name] = to_jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_text"):
        return obj.to_text()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = round((time.perf_counter() - self.start) * 1000, 3)
        return False


def make_report(op: str, params: dict, outcome, *, inputs: dict | None = None, budget: int | None = None, elapsed_ms: float | None = None, **extra) -> dict:
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "op": op,
        "params": to_jsonable(params),
        "inputs": {k: v.digest() if isinstance(v, FieldMatrix) else v for k, v in (inputs or {}).items()},
        "outcome": to_jsonable(outcome),
        "budget": budget,
    }
    for k, v in extra.items():
        report[k] = to_jsonable(v)
    if elapsed_ms is not None:
        report["elapsed_ms"] = elapsed_ms
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
