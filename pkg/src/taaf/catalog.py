"""Catalog of scalar activation functions with analytic first derivatives.

Each entry carries the function value, its first derivative, vectorized
(numpy) versions of both, a fixed-parameter schema and a kink rule (points
of non-differentiability).  Conventions:

* At a kink the derivative is the derivative of the right-hand piece.
* Values that would leave the double range saturate to +/-max-float and
  the event is counted per thread (``saturation_count``); evaluations are
  total for every finite input.
* ``logistic_sigmoid`` and ``softplus`` use branch-wise stable forms, so
  no intermediate ``exp`` can overflow.
* ``erf`` is computed in-library by a rational approximation (constants
  below, absolute error <= 1.5e-7); its reported derivative is the exact
  derivative of the approximation, so derivative checks validate the code
  that actually runs.
"""

from __future__ import annotations

import json
import math
import sys
import threading
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "ActivationDescriptor",
    "FixedParam",
    "ParamDomainError",
    "UnknownActivationError",
    "bind",
    "clamp_finite",
    "derivative",
    "describe",
    "export_json",
    "ids",
    "kinks_for",
    "reset_saturation_count",
    "saturation_count",
    "value",
    "SOFTPP_OFFSET",
]

MAX_FLOAT = sys.float_info.max
_EXP_CUTOFF = 709.782712893384  # ln(max double)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Fixed vertical offset used by the Soft++ composite family.
SOFTPP_OFFSET = -math.log(2.0)


class UnknownActivationError(LookupError):
    """Raised when an activation id is not in the catalog."""


class ParamDomainError(ValueError):
    """Raised when a fixed-parameter binding is invalid for an entry."""


# --------------------------------------------------------------------------
# saturation diagnostics (per-thread, so concurrent evaluation stays safe)

_DIAG = threading.local()


def saturation_count() -> int:
    """Number of saturated evaluations on this thread since the last reset."""
    return getattr(_DIAG, "saturations", 0)


def reset_saturation_count() -> None:
    _DIAG.saturations = 0


def _note_saturation() -> None:
    _DIAG.saturations = saturation_count() + 1


def clamp_finite(v: float) -> float:
    """Replace an infinite result with +/-max-float, counting the event."""
    if math.isinf(v):
        _note_saturation()
        return MAX_FLOAT if v > 0 else -MAX_FLOAT
    return v


# --------------------------------------------------------------------------
# stable scalar primitives

def _exp(z: float) -> float:
    if z >= _EXP_CUTOFF:
        _note_saturation()
        return MAX_FLOAT
    return math.exp(z)


def _expm1(z: float) -> float:
    if z >= _EXP_CUTOFF:
        _note_saturation()
        return MAX_FLOAT
    return math.expm1(z)


def _sinh(z: float) -> float:
    try:
        return math.sinh(z)
    except OverflowError:
        _note_saturation()
        return MAX_FLOAT if z > 0 else -MAX_FLOAT


def _cosh(z: float) -> float:
    try:
        return math.cosh(z)
    except OverflowError:
        _note_saturation()
        return MAX_FLOAT


def _sigmoid(z: float) -> float:
    # branch-wise form: the exponent argument is always <= 0
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    t = math.exp(z)
    return t / (1.0 + t)


def _softplus(z: float) -> float:
    return max(z, 0.0) + math.log1p(math.exp(-abs(z)))


# Rational approximation of erf; max absolute error 1.39e-7 on [0, 6]
# (documented bound 1.5e-7).  Odd extension for negative arguments.
_ERF_P = 0.3275911
_ERF_A1 = 0.254829592
_ERF_A2 = -0.284496736
_ERF_A3 = 1.421413741
_ERF_A4 = -1.453152027
_ERF_A5 = 1.061405429


def _erf(x: float) -> float:
    ax = abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A1 + t * (_ERF_A2 + t * (_ERF_A3 + t * (_ERF_A4 + t * _ERF_A5))))
    y = 1.0 - poly * math.exp(-ax * ax)
    return y if x >= 0.0 else -y


def _erf_prime(x: float) -> float:
    # exact derivative of the approximation above (even function)
    ax = abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A1 + t * (_ERF_A2 + t * (_ERF_A3 + t * (_ERF_A4 + t * _ERF_A5))))
    dpoly = _ERF_A1 + t * (2.0 * _ERF_A2 + t * (3.0 * _ERF_A3 + t * (4.0 * _ERF_A4 + t * 5.0 * _ERF_A5)))
    e = math.exp(-ax * ax)
    return (2.0 * ax * poly + _ERF_P * t * t * dpoly) * e


# --------------------------------------------------------------------------
# scalar values and derivatives

def _v_identity(z):
    return z


def _d_identity(z):
    return 1.0


def _v_relu(z):
    return z if z > 0.0 else 0.0


def _d_relu(z):
    return 1.0 if z >= 0.0 else 0.0


def _v_lrelu(z, slope=0.01):
    return z if z >= 0.0 else slope * z


def _d_lrelu(z, slope=0.01):
    return 1.0 if z >= 0.0 else slope


def _v_hard_tanh(z):
    if z < -1.0:
        return -1.0
    if z > 1.0:
        return 1.0
    return z


def _d_hard_tanh(z):
    return 1.0 if -1.0 <= z < 1.0 else 0.0


def _v_sgn(z):
    if z > 0.0:
        return 1.0
    if z < 0.0:
        return -1.0
    return 0.0


def _d_sgn(z):
    return 0.0


def _v_step(z):
    return 1.0 if z <= 0.0 else 0.0


def _d_step(z):
    return 0.0


def _v_softplus(z):
    return _softplus(z)


def _d_softplus(z):
    return _sigmoid(z)


def _v_elu(z, a=1.0):
    return z if z >= 0.0 else a * math.expm1(z)


def _d_elu(z, a=1.0):
    return 1.0 if z >= 0.0 else a * math.exp(z)


def _v_silu(z):
    return z * _sigmoid(z)


def _d_silu(z):
    s = _sigmoid(z)
    return s + z * s * (1.0 - s)


def _v_gelu_erf(z):
    return z * _erf(z * _INV_SQRT2)


def _d_gelu_erf(z):
    u = z * _INV_SQRT2
    return _erf(u) + z * _erf_prime(u) * _INV_SQRT2


def _v_fts_core(z):
    return z * _sigmoid(z) if z >= 0.0 else 0.0


def _d_fts_core(z):
    if z < 0.0:
        return 0.0
    s = _sigmoid(z)
    return s + z * s * (1.0 - s)


def _v_etanh_core(z):
    return _exp(z) * math.tanh(z)


def _d_etanh_core(z):
    t = math.tanh(z)
    return _exp(z) * (t + 1.0 - t * t)


def _v_combhsine_core(z):
    return _sinh(z) + math.asinh(z)


def _d_combhsine_core(z):
    return _cosh(z) + 1.0 / math.sqrt(1.0 + z * z)


def _v_logish_core(z):
    return z * math.log1p(_sigmoid(z))


def _d_logish_core(z):
    s = _sigmoid(z)
    return math.log1p(s) + z * s * (1.0 - s) / (1.0 + s)


def _rmaf_den(z):
    return 0.25 * (1.0 + _exp(-z)) + 0.75


def _v_rmaf_core(z, c=1.0):
    return z * _rmaf_den(z) ** -c


def _d_rmaf_core(z, c=1.0):
    den = _rmaf_den(z)
    return den ** -c * (1.0 + 0.25 * c * z * _exp(-z) / den)


def _v_bipolar(z):
    # (1 - e^-z) / (1 + e^-z); branch keeps the exponent non-positive
    if z >= 0.0:
        t = math.exp(-z)
        return (1.0 - t) / (1.0 + t)
    t = math.exp(z)
    return (t - 1.0) / (t + 1.0)


def _d_bipolar(z):
    b = _v_bipolar(z)
    return 0.5 * (1.0 - b * b)


def _v_double_bipolar(z):
    return 2.0 * _v_bipolar(z)


def _d_double_bipolar(z):
    b = _v_bipolar(z)
    return 1.0 - b * b


def _v_pstanh_core(z):
    return z * (1.0 + math.tanh(z))


def _d_pstanh_core(z):
    t = math.tanh(z)
    return 1.0 + t + z * (1.0 - t * t)


def _v_gauss_exp(z):
    return math.exp(-abs(z))


def _d_gauss_exp(z):
    # right derivative at 0 is -1 (right-hand piece e^-z)
    return -math.exp(-z) if z >= 0.0 else math.exp(z)


def _v_gaussian_pdf(z):
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def _d_gaussian_pdf(z):
    return -z * _v_gaussian_pdf(z)


def _v_exp_minus_one(z):
    return _expm1(z)


def _d_exp_minus_one(z):
    return _exp(z)


def _v_power_k(z, k=2.0):
    return z ** int(k)


def _d_power_k(z, k=2.0):
    ik = int(k)
    if ik == 0:
        return 0.0
    return ik * z ** (ik - 1)


# --------------------------------------------------------------------------
# numpy values and derivatives (internal batching; used by the kernels
# fallback and the trainer, never part of the public scalar surface)

def _np_sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    t = np.exp(z[~pos])
    out[~pos] = t / (1.0 + t)
    return out


def _np_softplus(z):
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _np_erf(x):
    ax = np.abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A1 + t * (_ERF_A2 + t * (_ERF_A3 + t * (_ERF_A4 + t * _ERF_A5))))
    return np.copysign(1.0 - poly * np.exp(-ax * ax), x)


def _np_erf_prime(x):
    ax = np.abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A1 + t * (_ERF_A2 + t * (_ERF_A3 + t * (_ERF_A4 + t * _ERF_A5))))
    dpoly = _ERF_A1 + t * (2.0 * _ERF_A2 + t * (3.0 * _ERF_A3 + t * (4.0 * _ERF_A4 + t * 5.0 * _ERF_A5)))
    return (2.0 * ax * poly + _ERF_P * t * t * dpoly) * np.exp(-ax * ax)


def _np_bipolar(z):
    return np.tanh(0.5 * z)


def _np_rmaf_den(z):
    # exponent clamp keeps the denominator finite for any input
    return 0.25 * (1.0 + np.exp(np.minimum(-z, _EXP_CUTOFF))) + 0.75


_NP_VALUES: dict[str, Callable] = {
    "identity": lambda z: z.copy(),
    "relu": lambda z: np.maximum(z, 0.0),
    "lrelu": lambda z, slope=0.01: np.where(z >= 0.0, z, slope * z),
    "hard_tanh": lambda z: np.clip(z, -1.0, 1.0),
    "sgn": lambda z: np.sign(z),
    "step": lambda z: np.where(z <= 0.0, 1.0, 0.0),
    "logistic_sigmoid": _np_sigmoid,
    "tanh": np.tanh,
    "sinh": np.sinh,
    "asinh": np.arcsinh,
    "exp_minus_one": np.expm1,
    "softplus": _np_softplus,
    "elu": lambda z, a=1.0: np.where(z >= 0.0, z, a * np.expm1(np.minimum(z, 0.0))),
    "silu": lambda z: z * _np_sigmoid(z),
    "gelu_erf": lambda z: z * _np_erf(z * _INV_SQRT2),
    "fts_core": lambda z: np.where(z >= 0.0, z * _np_sigmoid(z), 0.0),
    "etanh_core": lambda z: np.exp(z) * np.tanh(z),
    "combhsine_core": lambda z: np.sinh(z) + np.arcsinh(z),
    "logish_core": lambda z: z * np.log1p(_np_sigmoid(z)),
    "rmaf_core": lambda z, c=1.0: z * _np_rmaf_den(z) ** -c,
    "bipolar_sigmoid": _np_bipolar,
    "double_bipolar": lambda z: 2.0 * _np_bipolar(z),
    "pstanh_core": lambda z: z * (1.0 + np.tanh(z)),
    "sin": np.sin,
    "gauss_exp": lambda z: np.exp(-np.abs(z)),
    "gaussian_pdf": lambda z: _INV_SQRT_2PI * np.exp(-0.5 * z * z),
    "power_k": lambda z, k=2.0: np.power(z, int(k)),
}


def _np_d_silu(z):
    s = _np_sigmoid(z)
    return s + z * s * (1.0 - s)


def _np_d_logish(z):
    s = _np_sigmoid(z)
    return np.log1p(s) + z * s * (1.0 - s) / (1.0 + s)


def _np_d_rmaf(z, c=1.0):
    den = _np_rmaf_den(z)
    return den ** -c * (1.0 + 0.25 * c * z * np.exp(np.minimum(-z, _EXP_CUTOFF)) / den)


def _np_d_power(z, k=2.0):
    ik = int(k)
    if ik == 0:
        return np.zeros_like(z)
    return ik * np.power(z, ik - 1)


_NP_DERIVS: dict[str, Callable] = {
    "identity": lambda z: np.ones_like(z),
    "relu": lambda z: np.where(z >= 0.0, 1.0, 0.0),
    "lrelu": lambda z, slope=0.01: np.where(z >= 0.0, 1.0, slope),
    "hard_tanh": lambda z: np.where((z >= -1.0) & (z < 1.0), 1.0, 0.0),
    "sgn": lambda z: np.zeros_like(z),
    "step": lambda z: np.zeros_like(z),
    "logistic_sigmoid": lambda z: _np_sigmoid(z) * (1.0 - _np_sigmoid(z)),
    "tanh": lambda z: 1.0 - np.tanh(z) ** 2,
    "sinh": np.cosh,
    "asinh": lambda z: 1.0 / np.sqrt(1.0 + z * z),
    "exp_minus_one": np.exp,
    "softplus": _np_sigmoid,
    "elu": lambda z, a=1.0: np.where(z >= 0.0, 1.0, a * np.exp(np.minimum(z, 0.0))),
    "silu": _np_d_silu,
    "gelu_erf": lambda z: _np_erf(z * _INV_SQRT2) + z * _np_erf_prime(z * _INV_SQRT2) * _INV_SQRT2,
    "fts_core": lambda z: np.where(z >= 0.0, _np_d_silu(z), 0.0),
    "etanh_core": lambda z: np.exp(z) * (np.tanh(z) + 1.0 - np.tanh(z) ** 2),
    "combhsine_core": lambda z: np.cosh(z) + 1.0 / np.sqrt(1.0 + z * z),
    "logish_core": _np_d_logish,
    "rmaf_core": _np_d_rmaf,
    "bipolar_sigmoid": lambda z: 0.5 * (1.0 - _np_bipolar(z) ** 2),
    "double_bipolar": lambda z: 1.0 - _np_bipolar(z) ** 2,
    "pstanh_core": lambda z: 1.0 + np.tanh(z) + z * (1.0 - np.tanh(z) ** 2),
    "sin": np.cos,
    "gauss_exp": lambda z: np.where(z >= 0.0, -1.0, 1.0) * np.exp(-np.abs(z)),
    "gaussian_pdf": lambda z: -z * _INV_SQRT_2PI * np.exp(-0.5 * z * z),
    "power_k": _np_d_power,
}


# --------------------------------------------------------------------------
# descriptors

@dataclass(frozen=True)
class FixedParam:
    name: str
    default: float
    domain: tuple[float, float]  # closed interval; +/-inf for unbounded
    integer: bool = False


@dataclass(frozen=True)
class ActivationDescriptor:
    id: str
    fixed_params: tuple[FixedParam, ...]
    kinks: tuple[float, ...]  # evaluated at the default binding
    kink_rule: str
    odd: bool
    anchor: str
    notes: str


@dataclass(frozen=True)
class _Entry:
    id: str
    code: int  # opcode shared with the compiled kernels
    value: Callable
    deriv: Callable
    fixed: tuple[FixedParam, ...] = ()
    kinks: Callable[[dict], tuple[float, ...]] = lambda p: ()
    fd_exclude: Callable[[dict], tuple[float, ...]] | None = None
    kink_rule: str = "none"
    odd: bool = False
    anchor: str = ""
    notes: str = ""


_INF = math.inf

_ENTRIES: tuple[_Entry, ...] = (
    _Entry("identity", 0, _v_identity, _d_identity, odd=True, notes="linear pass-through"),
    _Entry("relu", 1, _v_relu, _d_relu,
           kinks=lambda p: (0.0,), kink_rule="0",
           notes="max(0, z); derivative 1 at the kink (right rule)"),
    _Entry("lrelu", 2, _v_lrelu, _d_lrelu,
           fixed=(FixedParam("slope", 0.01, (0.0, 1.0)),),
           kinks=lambda p: (0.0,), kink_rule="0",
           notes="fixed negative-side slope"),
    _Entry("hard_tanh", 3, _v_hard_tanh, _d_hard_tanh,
           kinks=lambda p: (-1.0, 1.0), kink_rule="-1, 1",
           notes="clamp(z, -1, 1)"),
    _Entry("sgn", 4, _v_sgn, _d_sgn,
           kinks=lambda p: (0.0,), kink_rule="0", odd=True,
           notes="jump at 0; derivative of the constant pieces is 0"),
    _Entry("step", 5, _v_step, _d_step,
           kinks=lambda p: (0.0,), kink_rule="0",
           anchor="1, z <= 0",
           notes="1 for z <= 0, else 0; jump at 0"),
    _Entry("logistic_sigmoid", 6, _sigmoid, lambda z: _sigmoid(z) * (1.0 - _sigmoid(z)),
           notes="branch-wise stable 1/(1+e^-z)"),
    _Entry("tanh", 7, math.tanh, lambda z: 1.0 - math.tanh(z) ** 2, odd=True),
    _Entry("sinh", 8, _sinh, _cosh, odd=True,
           notes="saturates to max-float beyond |z| ~ 710"),
    _Entry("asinh", 9, math.asinh, lambda z: 1.0 / math.sqrt(1.0 + z * z), odd=True),
    _Entry("exp_minus_one", 10, _v_exp_minus_one, _d_exp_minus_one,
           notes="e^z - 1 via expm1"),
    _Entry("softplus", 11, _v_softplus, _d_softplus,
           notes="max(z,0) + log1p(e^-|z|); derivative is the logistic sigmoid"),
    _Entry("elu", 12, _v_elu, _d_elu,
           fixed=(FixedParam("a", 1.0, (0.0, _INF)),),
           kinks=lambda p: () if p.get("a", 1.0) == 1.0 else (0.0,),
           fd_exclude=lambda p: (0.0,),
           kink_rule="0 when a != 1",
           notes="second derivative jumps at 0 even for a = 1, so difference "
                 "checks always exclude it"),
    _Entry("silu", 13, _v_silu, _d_silu, notes="z * sigmoid(z)"),
    _Entry("gelu_erf", 14, _v_gelu_erf, _d_gelu_erf,
           anchor="Gauss error function",
           notes="z * erf(z/sqrt(2)) with the in-library erf approximation; "
                 "derivative differentiates the approximation itself"),
    _Entry("fts_core", 15, _v_fts_core, _d_fts_core,
           kinks=lambda p: (0.0,), kink_rule="0",
           anchor="only parameter of the Flatted-T Swish",
           notes="relu(z) * sigmoid(z)"),
    _Entry("etanh_core", 16, _v_etanh_core, _d_etanh_core,
           notes="e^z * tanh(z)"),
    _Entry("combhsine_core", 17, _v_combhsine_core, _d_combhsine_core,
           anchor="fixed parameter a for input scaling", odd=True,
           notes="sinh(z) + asinh(z)"),
    _Entry("logish_core", 18, _v_logish_core, _d_logish_core,
           notes="z * ln(1 + sigmoid(z))"),
    _Entry("rmaf_core", 19, _v_rmaf_core, _d_rmaf_core,
           fixed=(FixedParam("c", 1.0, (0.0, 8.0)),),
           anchor="0.25(1+exp(-z))+0.75",
           notes="z / (0.25(1+e^-z) + 0.75)^c; defaults b-free, c = 1 is a "
                 "configuration choice"),
    _Entry("bipolar_sigmoid", 20, _v_bipolar, _d_bipolar, odd=True,
           notes="(1-e^-z)/(1+e^-z), branch-symmetric so oddness is exact"),
    _Entry("double_bipolar", 21, _v_double_bipolar, _d_double_bipolar, odd=True,
           notes="2(1-e^-z)/(1+e^-z)"),
    _Entry("pstanh_core", 22, _v_pstanh_core, _d_pstanh_core,
           notes="z * (1 + tanh(z))"),
    _Entry("sin", 23, math.sin, math.cos, odd=True),
    _Entry("gauss_exp", 24, _v_gauss_exp, _d_gauss_exp,
           kinks=lambda p: (0.0,), kink_rule="0",
           notes="e^-|z|; right derivative -1 at 0"),
    _Entry("gaussian_pdf", 25, _v_gaussian_pdf, _d_gaussian_pdf,
           notes="standard normal density (mixture-of-Gaussians branch kernel)"),
    _Entry("power_k", 26, _v_power_k, _d_power_k,
           fixed=(FixedParam("k", 2.0, (0.0, 8.0), integer=True),),
           notes="z^k for integer k (polynomial-expansion style inner)"),
)

_BY_ID: dict[str, _Entry] = {e.id: e for e in _ENTRIES}
assert len(_BY_ID) == len(_ENTRIES), "duplicate catalog id"


# --------------------------------------------------------------------------
# public operations

def ids() -> tuple[str, ...]:
    return tuple(e.id for e in _ENTRIES)


def _entry(fn_id: str) -> _Entry:
    try:
        return _BY_ID[fn_id]
    except KeyError:
        raise UnknownActivationError(f"unknown activation id: {fn_id!r}") from None


def _validate_binding(entry: _Entry, params: Mapping[str, float] | None) -> dict[str, float]:
    binding = {p.name: p.default for p in entry.fixed}
    if not params:
        return binding
    for name, raw in params.items():
        spec = next((p for p in entry.fixed if p.name == name), None)
        if spec is None:
            raise ParamDomainError(f"{entry.id}: unknown fixed parameter {name!r}")
        v = float(raw)
        if not spec.domain[0] <= v <= spec.domain[1]:
            raise ParamDomainError(
                f"{entry.id}: {name}={v!r} outside domain [{spec.domain[0]}, {spec.domain[1]}]")
        if spec.integer and v != int(v):
            raise ParamDomainError(f"{entry.id}: {name}={v!r} must be an integer")
        binding[name] = v
    return binding


def describe(fn_id: str) -> ActivationDescriptor:
    e = _entry(fn_id)
    defaults = {p.name: p.default for p in e.fixed}
    return ActivationDescriptor(
        id=e.id,
        fixed_params=e.fixed,
        kinks=tuple(e.kinks(defaults)),
        kink_rule=e.kink_rule,
        odd=e.odd,
        anchor=e.anchor,
        notes=e.notes,
    )


def bind(fn_id: str, params: Mapping[str, float] | None = None):
    """Return ``(value_fn, deriv_fn)`` closures with the binding applied.

    The closures skip per-call validation, which matters in grid sweeps.
    """
    e = _entry(fn_id)
    binding = _validate_binding(e, params)
    if binding:
        fv, fd = e.value, e.deriv
        return (lambda z: fv(z, **binding)), (lambda z: fd(z, **binding))
    return e.value, e.deriv


def value(fn_id: str, params: Mapping[str, float] | None, z: float) -> float:
    e = _entry(fn_id)
    binding = _validate_binding(e, params)
    return clamp_finite(e.value(z, **binding) if binding else e.value(z))


def derivative(fn_id: str, params: Mapping[str, float] | None, z: float) -> float:
    e = _entry(fn_id)
    binding = _validate_binding(e, params)
    return clamp_finite(e.deriv(z, **binding) if binding else e.deriv(z))


def kinks_for(fn_id: str, params: Mapping[str, float] | None = None) -> tuple[float, ...]:
    """Points where the left and right derivatives differ."""
    e = _entry(fn_id)
    return tuple(e.kinks(_validate_binding(e, params)))


def fd_exclusions(fn_id: str, params: Mapping[str, float] | None = None) -> tuple[float, ...]:
    """Points excluded from difference-quotient checks.

    A superset of :func:`kinks_for`: also contains curvature breaks (e.g.
    ``elu`` at 0 with a = 1) where central differences lose accuracy even
    though the function is differentiable.
    """
    e = _entry(fn_id)
    binding = _validate_binding(e, params)
    rule = e.fd_exclude if e.fd_exclude is not None else e.kinks
    return tuple(rule(binding))


def is_odd(fn_id: str) -> bool:
    return _entry(fn_id).odd


def np_value_fn(fn_id: str) -> Callable:
    """Vectorized value implementation (internal batching only)."""
    _entry(fn_id)
    return _NP_VALUES[fn_id]


def np_deriv_fn(fn_id: str) -> Callable:
    _entry(fn_id)
    return _NP_DERIVS[fn_id]


def kernel_code(fn_id: str) -> int:
    return _entry(fn_id).code


def export_json() -> str:
    """Canonical JSON catalog export: stable key order, UTF-8, one object
    per entry sorted by id."""
    out = []
    for e in sorted(_ENTRIES, key=lambda e: e.id):
        out.append({
            "id": e.id,
            "fixed_params": [
                {
                    "name": p.name,
                    "default": p.default,
                    "domain": [None if math.isinf(p.domain[0]) else p.domain[0],
                               None if math.isinf(p.domain[1]) else p.domain[1]],
                    "integer": p.integer,
                }
                for p in e.fixed
            ],
            "kink_rule": e.kink_rule,
            "odd": e.odd,
            "anchor": e.anchor,
            "notes": e.notes,
        })
    return json.dumps(out, ensure_ascii=False, indent=2)
