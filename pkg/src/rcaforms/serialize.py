"""Conversion of results (exact scalars, matrices, dataclasses) to JSON-friendly values."""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np

from .exact import ExactMatrix
from .scalars import QSqrt


def scalar(x):
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, (Fraction, QSqrt)):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        if x.imag == 0:
            return _finite(x.real)
        return {"re": _finite(x.real), "im": _finite(x.imag)}
    if isinstance(x, (float, np.floating)):
        return _finite(float(x))
    if isinstance(x, np.integer):
        return int(x)
    return str(x)


def _finite(v: float):
    return v if math.isfinite(v) else str(v)


def matrix(M) -> list:
    if isinstance(M, ExactMatrix):
        return [[str(v) for v in row] for row in M.entries()]
    A = np.asarray(M)
    if np.iscomplexobj(A) and not np.any(A.imag):
        A = A.real
    if A.dtype == object:
        return [[scalar(v) for v in row] for row in A]
    if np.iscomplexobj(A):
        return {"re": A.real.tolist(), "im": A.imag.tolist()}
    return A.tolist()


def jsonable(obj):
    """Recursive conversion; dict keys become strings."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)):
                jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (ExactMatrix, np.ndarray)):
        return matrix(obj) if getattr(obj, "ndim", 2) == 2 else [scalar(v) for v in np.asarray(obj).ravel()]
    return scalar(obj)
