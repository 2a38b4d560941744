"""Batch-evaluation backend selection.

Two interchangeable implementations of the buffer kernels exist: a
compiled extension (``taaf._kernels``, built from Cython) and a numpy
fallback (``taaf._kernels_py``).  The compiled one is preferred when
importable; ``TAAF_KERNELS=python`` or ``TAAF_KERNELS=compiled`` forces a
choice at import time, and every function below also takes an optional
``backend=`` override so the two can be compared side by side.

This is internal batching machinery (used by the trainer and the
benchmark harness); the public evaluation surface of the library stays
scalar.
"""

from __future__ import annotations

import os
from typing import Mapping

import numpy as np

from . import catalog
from . import _kernels_py

_IMPLS = {"python": _kernels_py}
try:  # pragma: no cover - exercised only when the extension is built
    from . import _kernels as _compiled

    _IMPLS["compiled"] = _compiled
except ImportError:
    _compiled = None

_FORCED = os.environ.get("TAAF_KERNELS", "").strip().lower()
if _FORCED and _FORCED not in _IMPLS:
    raise ImportError(
        f"TAAF_KERNELS={_FORCED!r} requested but only {sorted(_IMPLS)} available")
BACKEND = _FORCED or ("compiled" if "compiled" in _IMPLS else "python")


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def _impl(backend: str | None):
    name = backend or BACKEND
    try:
        return _IMPLS[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}; have {sorted(_IMPLS)}") from None


def _resolve(fn_id: str, fixed: Mapping[str, float] | None) -> tuple[int, float]:
    code = catalog.kernel_code(fn_id)
    desc = catalog.describe(fn_id)
    if not desc.fixed_params:
        return code, 0.0
    spec = desc.fixed_params[0]
    p = float((fixed or {}).get(spec.name, spec.default))
    return code, p


def _buffer(z) -> np.ndarray:
    return np.ascontiguousarray(z, dtype=np.float64)


def eval_values(fn_id: str, fixed: Mapping[str, float] | None, z,
                backend: str | None = None) -> np.ndarray:
    code, p = _resolve(fn_id, fixed)
    buf = _buffer(z)
    out = np.empty_like(buf)
    _impl(backend).value_buffer(code, p, buf, out)
    return out


def eval_derivs(fn_id: str, fixed: Mapping[str, float] | None, z,
                backend: str | None = None) -> np.ndarray:
    code, p = _resolve(fn_id, fixed)
    buf = _buffer(z)
    out = np.empty_like(buf)
    _impl(backend).deriv_buffer(code, p, buf, out)
    return out


def taaf_values(alpha: float, beta: float, gamma: float, delta: float,
                fn_id: str, fixed: Mapping[str, float] | None, z,
                backend: str | None = None) -> np.ndarray:
    code, p = _resolve(fn_id, fixed)
    buf = _buffer(z)
    out = np.empty_like(buf)
    _impl(backend).taaf_value_buffer(alpha, beta, gamma, delta, code, p, buf, out)
    return out


def checksum(fn_id: str, fixed: Mapping[str, float] | None, z,
             backend: str | None = None) -> float:
    code, p = _resolve(fn_id, fixed)
    return _impl(backend).checksum_value(code, p, _buffer(z))


def taaf_checksum(alpha: float, beta: float, gamma: float, delta: float,
                  fn_id: str, fixed: Mapping[str, float] | None, z,
                  backend: str | None = None) -> float:
    code, p = _resolve(fn_id, fixed)
    return _impl(backend).checksum_taaf(alpha, beta, gamma, delta, code, p, _buffer(z))
