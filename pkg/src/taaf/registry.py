"""Registry of named activations that reduce to the four-parameter transform.

Each record binds a named activation's published closed form (the "direct"
side) to a parameterization of ``alpha * f(beta z + gamma) + delta`` over a
catalog inner function, with the bindings given as small closed-form
expressions of the activation's own parameters.  ``verify`` instantiates a
record at a concrete binding and measures the worst absolute difference
between the two sides over a grid.

Records flagged ``disputed`` reproduce a printed parameterization that is
internally inconsistent with its own description; they are reported but
excluded from hard-failure acceptance gates, and never silently "fixed".

The registry serializes to a JSON array (expressions in prefix form such
as ``neg(mul(a,b))``); the ``TAAF_REGISTRY`` environment variable points
the CLI at an alternative registry file.
"""

from __future__ import annotations

import json
import math
import os
import random
import re
from dataclasses import dataclass
from typing import Callable, Mapping

from . import catalog
from .engine import TaafNode, TaafParams, taaf_eval

__all__ = [
    "DivisionGuardError",
    "EquivalenceRecord",
    "OutOfDomainError",
    "ParamExpr",
    "VerifyResult",
    "active_records",
    "builtin_records",
    "instantiate",
    "list_records",
    "load_records",
    "records_from_json",
    "records_to_json",
    "save_records",
    "seeded_bindings",
    "verify",
]

REGISTRY_ENV_VAR = "TAAF_REGISTRY"
STANDARD_GRID = tuple(-5.0 + 10.0 * (k / 200.0) for k in range(201))
BINDING_RANGE = (-3.0, 3.0)  # sampling window intersected with each domain
BINDING_EXCLUSION = 1e-3     # |value| below this is resampled (degenerate scales)


class DivisionGuardError(ZeroDivisionError):
    """A parameter expression divided by zero."""


class OutOfDomainError(ValueError):
    """A binding fell outside a record's declared parameter domain."""


# --------------------------------------------------------------------------
# parameter expressions: const | param | neg | mul | div | recip

@dataclass(frozen=True)
class ParamExpr:
    op: str
    value: float = 0.0
    name: str = ""
    args: tuple["ParamExpr", ...] = ()

    @staticmethod
    def const(v: float) -> "ParamExpr":
        return ParamExpr("const", value=float(v))

    @staticmethod
    def param(name: str) -> "ParamExpr":
        return ParamExpr("param", name=name)

    @staticmethod
    def neg(e: "ParamExpr") -> "ParamExpr":
        return ParamExpr("neg", args=(e,))

    @staticmethod
    def mul(a: "ParamExpr", b: "ParamExpr") -> "ParamExpr":
        return ParamExpr("mul", args=(a, b))

    @staticmethod
    def div(a: "ParamExpr", b: "ParamExpr") -> "ParamExpr":
        return ParamExpr("div", args=(a, b))

    @staticmethod
    def recip(e: "ParamExpr") -> "ParamExpr":
        return ParamExpr("recip", args=(e,))

    def evaluate(self, binding: Mapping[str, float]) -> float:
        if self.op == "const":
            return self.value
        if self.op == "param":
            try:
                return float(binding[self.name])
            except KeyError:
                raise OutOfDomainError(f"binding missing parameter {self.name!r}") from None
        if self.op == "neg":
            return -self.args[0].evaluate(binding)
        if self.op == "mul":
            return self.args[0].evaluate(binding) * self.args[1].evaluate(binding)
        if self.op in ("div", "recip"):
            den = self.args[-1].evaluate(binding)
            if den == 0.0:
                raise DivisionGuardError(f"zero denominator in {self.to_string()}")
            num = 1.0 if self.op == "recip" else self.args[0].evaluate(binding)
            return num / den
        raise ValueError(f"unknown expression op {self.op!r}")

    def to_string(self) -> str:
        if self.op == "const":
            return _fmt_number(self.value)
        if self.op == "param":
            return self.name
        inner = ",".join(a.to_string() for a in self.args)
        return f"{self.op}({inner})"


def _fmt_number(v: float) -> str:
    return str(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)


_TOKEN = re.compile(r"\s*([a-z_][a-z0-9_]*|[(),]|-?\d+(?:\.\d+)?(?:e-?\d+)?)", re.I)
_OPS = {"neg": 1, "recip": 1, "mul": 2, "div": 2}


def parse_expr(text: str) -> ParamExpr:
    """Parse the prefix form, e.g. ``neg(mul(a,b))`` or ``div(c,b)`` or ``1``."""
    tokens = _TOKEN.findall(text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise ValueError(f"cannot tokenize expression {text!r}")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"bad expression {text!r}: expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def expr() -> ParamExpr:
        tok = take()
        if re.fullmatch(r"-?\d+(?:\.\d+)?(?:e-?\d+)?", tok, re.I):
            return ParamExpr.const(float(tok))
        if tok in _OPS:
            take("(")
            args = [expr()]
            for _ in range(_OPS[tok] - 1):
                take(",")
                args.append(expr())
            take(")")
            return ParamExpr(tok, args=tuple(args))
        if re.fullmatch(r"[a-z_][a-z0-9_]*", tok, re.I):
            return ParamExpr.param(tok)
        raise ValueError(f"bad token {tok!r} in expression {text!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in expression {text!r}")
    return result


# --------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class EquivalenceRecord:
    name: str
    direct_id: str
    inner_id: str
    alpha: ParamExpr
    beta: ParamExpr
    gamma: ParamExpr
    delta: ParamExpr
    param_domains: tuple[tuple[str, float, float], ...]
    inner_fixed: tuple[tuple[str, ParamExpr], ...] = ()
    disputed: bool = False
    anchor: str = ""
    notes: str = ""


@dataclass(frozen=True)
class VerifyResult:
    max_abs_diff: float
    worst_z: float
    points_checked: int = 0


_DIRECT: dict[str, Callable[[float, Mapping[str, float]], float]] = {}


def _direct(name: str):
    def deco(fn):
        _DIRECT[name] = fn
        return fn
    return deco


def _sig(z: float) -> float:
    return catalog.value("logistic_sigmoid", {}, z)


def _relu(z: float) -> float:
    return z if z > 0.0 else 0.0


def _elu(z: float, a: float = 1.0) -> float:
    return catalog.value("elu", {"a": a}, z)


def _hardtanh(z: float) -> float:
    return catalog.value("hard_tanh", {}, z)


# Direct closed forms, written from the named activation's published shape
# (affine composition spelled out independently of the transform engine).

@_direct("scaled_tanh")
def _dir_scaled_tanh(z, b):
    return b["a"] * math.tanh(b["b"] * z)

@_direct("e_tanh")
def _dir_e_tanh(z, b):
    return b["a"] * math.exp(z) * math.tanh(z)

@_direct("sss")
def _dir_sss(z, b):
    return _sig(b["a"] * (z - b["b"]))

@_direct("vsf")
def _dir_vsf(z, b):
    return b["a"] * _sig(b["b"] * z) - b["c"]

@_direct("slrelu")
def _dir_slrelu(z, b):
    return b["a"] * _relu(z)

@_direct("e_swish")
def _dir_e_swish(z, b):
    return b["a"] * z * _sig(z)

@_direct("sgelu")
def _dir_sgelu(z, b):
    return b["a"] * catalog.value("gelu_erf", {}, z)

@_direct("comb_h_sine")
def _dir_comb_h_sine(z, b):
    az = b["a"] * z
    return math.sinh(az) + math.asinh(az)

@_direct("drlu")
def _dir_drlu(z, b):
    return _relu(z + b["a"])

@_direct("drelu")
def _dir_drelu(z, b):
    return _relu(z - b["a"]) + b["a"]

@_direct("disrelu")
def _dir_disrelu(z, b):
    return _relu(z + b["a"]) - b["a"]

@_direct("fts")
def _dir_fts(z, b):
    return (z * _sig(z) if z >= 0.0 else 0.0) + b["t"]

@_direct("psoftplus")
def _dir_psoftplus(z, b):
    return b["a"] * catalog.value("softplus", {}, z) - b["a"] * b["b"]

@_direct("frelu")
def _dir_frelu(z, b):
    return _relu(z + b["a"]) + b["b"]

@_direct("shilu")
def _dir_shilu(z, b):
    return b["a"] * _relu(z) + b["b"]

@_direct("abrelu")
def _dir_abrelu(z, b):
    return _relu(z - b["a"])

@_direct("pprelu")
def _dir_pprelu(z, b):
    return b["a"] * _relu(z)

@_direct("plogish")
def _dir_plogish(z, b):
    bz = b["b"] * z
    return (b["a"] / b["b"]) * bz * math.log1p(_sig(bz))

@_direct("aoaf")
def _dir_aoaf(z, b):
    return _relu(z - b["b"] * b["a"]) + b["c"] * b["a"]

@_direct("lelelu")
def _dir_lelelu(z, b):
    return b["a"] * catalog.value("lrelu", {}, z)

@_direct("rmaf")
def _dir_rmaf(z, b):
    den = 0.25 * (1.0 + math.exp(-z)) + 0.75
    return (b["a"] * b["b"]) * (z * den ** -b["c"])

@_direct("rsign")
def _dir_rsign(z, b):
    return catalog.value("sgn", {}, z - b["a"])

@_direct("paired_relu_1")
def _dir_paired_relu_1(z, b):
    return _relu(b["a"] * z - b["b"])

@_direct("paired_relu_2")
def _dir_paired_relu_2(z, b):
    return _relu(b["c"] * z - b["d"])

@_direct("mba_k")
def _dir_mba_k(z, b):
    return _relu(z + b["b"])

@_direct("shelu")
def _dir_shelu(z, b):
    return _elu(z + b["b"], b["a"])

@_direct("svelu")
def _dir_svelu(z, b):
    return _elu(z, b["a"]) + b["b"]

@_direct("pshelu")
def _dir_pshelu(z, b):
    return b["a"] * _elu((z + b["c"]) / b["b"])

@_direct("psvelu")
def _dir_psvelu(z, b):
    return b["a"] * _elu(z / b["b"]) + b["c"]

@_direct("sh_hardtanh")
def _dir_sh_hardtanh(z, b):
    return _hardtanh(z - b["a"])

@_direct("sv_hardtanh")
def _dir_sv_hardtanh(z, b):
    return _hardtanh(z) + b["a"]

@_direct("pfelu")
def _dir_pfelu(z, b):
    return _elu(z, b["a"]) + b["b"]

@_direct("adaptive_hardtanh")
def _dir_adaptive_hardtanh(z, b):
    return _hardtanh(b["a"] * (z - b["b"]))

@_direct("shape_autotuning_sigmoid")
def _dir_shape_autotuning_sigmoid(z, b):
    # 2a(1-e^{az})/(1+e^{az}), stable branch on the exponent sign
    az = b["a"] * z
    if az <= 0.0:
        t = math.exp(az)
        return 2.0 * b["a"] * (1.0 - t) / (1.0 + t)
    t = math.exp(-az)
    return 2.0 * b["a"] * (t - 1.0) / (t + 1.0)

@_direct("generalized_tanh")
def _dir_generalized_tanh(z, b):
    bz = b["b"] * z
    if bz <= 0.0:
        t = math.exp(bz)
        return b["a"] * (1.0 - t) / (1.0 + t)
    t = math.exp(-bz)
    return b["a"] * (t - 1.0) / (t + 1.0)

@_direct("trainable_amplitude")
def _dir_trainable_amplitude(z, b):
    return b["a"] * math.tanh(z) + b["b"]

@_direct("slope_varying")
def _dir_slope_varying(z, b):
    return catalog.value("softplus", {}, b["a"] * z)

@_direct("svaf")
def _dir_svaf(z, b):
    return math.tanh(b["a"] * z)

@_direct("assf")
def _dir_assf(z, b):
    return _sig(b["a"] * z)

@_direct("scaled_sigmoid")
def _dir_scaled_sigmoid(z, b):
    return b["a"] * _sig(b["b"] * z)

@_direct("swish")
def _dir_swish(z, b):
    az = b["a"] * z
    return az * _sig(az)

@_direct("ahaf")
def _dir_ahaf(z, b):
    bz = b["b"] * z
    return b["a"] * bz * _sig(bz)

@_direct("adaptive_slope_tanh")
def _dir_adaptive_slope_tanh(z, b):
    # expansion of the printed parameterization (record is disputed)
    return math.tanh(b["a"] * z + 1.0) + 1.0

@_direct("pstanh")
def _dir_pstanh(z, b):
    bz = b["b"] * z
    return b["a"] * bz * (1.0 + math.tanh(bz))

@_direct("ssinh")
def _dir_ssinh(z, b):
    return b["a"] * math.sinh(b["b"] * z)

@_direct("sexp")
def _dir_sexp(z, b):
    return b["a"] * math.expm1(b["b"] * z)

@_direct("pfts")
def _dir_pfts(z, b):
    # expansion of the printed parameterization (record is disputed)
    u = z + 1.0
    return (u * _sig(u) if u >= 0.0 else 0.0) + b["t"]

@_direct("parameterized_softplus")
def _dir_parameterized_softplus(z, b):
    return catalog.value("softplus", {}, z) - b["a"]

@_direct("erturul_af1")
def _dir_erturul_af1(z, b):
    return _sig(b["a"] * z + b["b"])

@_direct("erturul_af2")
def _dir_erturul_af2(z, b):
    return math.sin(b["a"] * z + b["b"])

@_direct("erturul_af3")
def _dir_erturul_af3(z, b):
    return math.exp(-abs(b["a"] * (z - b["b"])))

@_direct("erturul_af4")
def _dir_erturul_af4(z, b):
    return 1.0 if b["a"] * z + b["b"] <= 0.0 else 0.0


# --------------------------------------------------------------------------
# builtin record table

_D33 = (-3.0, 3.0)
_POS = (0.05, 3.0)


def _rec(name, inner, *, alpha="1", beta="1", gamma="0", delta="0",
         domains, inner_fixed=None, direct=None, disputed=False, anchor="", notes=""):
    return EquivalenceRecord(
        name=name,
        direct_id=direct or name,
        inner_id=inner,
        alpha=parse_expr(alpha),
        beta=parse_expr(beta),
        gamma=parse_expr(gamma),
        delta=parse_expr(delta),
        param_domains=tuple((n, lo, hi) for n, (lo, hi) in domains.items()),
        inner_fixed=tuple((n, parse_expr(e)) for n, e in (inner_fixed or {}).items()),
        disputed=disputed,
        anchor=anchor,
        notes=notes,
    )


def _build_records() -> tuple[EquivalenceRecord, ...]:
    records = [
        _rec("scaled_tanh", "tanh", alpha="a", beta="b",
             domains={"a": _D33, "b": _D33},
             anchor="parametrized as alpha = a, beta = b"),
        _rec("e_tanh", "etanh_core", alpha="a", domains={"a": _D33},
             anchor="fixed parameter a for vertical scaling"),
        _rec("sss", "logistic_sigmoid", beta="a", gamma="neg(mul(a,b))",
             domains={"a": _D33, "b": _D33},
             anchor="horizontal scaling and translation"),
        _rec("vsf", "logistic_sigmoid", alpha="a", beta="b", delta="neg(c)",
             domains={"a": _D33, "b": _D33, "c": _D33},
             anchor="translated and scaled"),
        _rec("slrelu", "relu", alpha="a", domains={"a": _D33},
             anchor="slope controlling parameter ... for positive inputs"),
        _rec("e_swish", "silu", alpha="a", domains={"a": _D33},
             anchor="E-swish is a special case of"),
        _rec("sgelu", "gelu_erf", alpha="a", domains={"a": _D33},
             anchor="Gauss error function",
             notes="difference bound follows the in-library erf approximation error"),
        _rec("comb_h_sine", "combhsine_core", beta="a", domains={"a": _D33},
             anchor="fixed parameter a for input scaling"),
        _rec("drlu", "relu", gamma="a", domains={"a": _D33},
             anchor="fixed predefined parameter for horizontal shifting"),
        _rec("drelu", "relu", gamma="neg(a)", delta="a", domains={"a": _D33},
             anchor="midpoint of the range of input values"),
        _rec("disrelu", "relu", gamma="a", delta="neg(a)", domains={"a": _D33},
             anchor="defined with a negative sign"),
        _rec("fts", "fts_core", delta="t", domains={"t": _D33},
             anchor="only parameter of the Flatted-T Swish"),
        _rec("psoftplus", "softplus", alpha="a", delta="neg(mul(a,b))",
             domains={"a": _D33, "b": _D33},
             anchor="fixed parameters a and b for scaling and translation"),
        _rec("frelu", "relu", gamma="a", delta="b", domains={"a": _D33, "b": _D33},
             anchor="controlling the vertical and horizontal translation"),
        _rec("shilu", "relu", alpha="a", delta="b", domains={"a": _D33, "b": _D33},
             anchor="adaptive vertical scaling using parameter"),
        _rec("abrelu", "relu", gamma="neg(a)", domains={"a": _D33},
             anchor="average of input activation map"),
        _rec("pprelu", "relu", alpha="a", domains={"a": _D33},
             anchor="adaptive variant of the slope-controlled rectifier"),
        _rec("plogish", "logish_core", alpha="div(a,b)", beta="b",
             domains={"a": _D33, "b": _D33},
             anchor="special case of nonadaptive"),
        _rec("aoaf", "relu", gamma="neg(mul(b,a))", delta="mul(c,a)",
             domains={"a": _D33, "b": _D33, "c": _D33},
             anchor="mean value of the inputs of neuron"),
        _rec("lelelu", "lrelu", alpha="a", domains={"a": _D33},
             anchor="added trainable parameter for scaling",
             notes="printed table also lists a unit vertical offset, which "
                   "contradicts the pure-scaling description; the scaling "
                   "form is registered"),
        _rec("rmaf", "rmaf_core", alpha="mul(a,b)",
             domains={"a": _D33, "b": _D33, "c": (0.25, 3.0)},
             inner_fixed={"c": "c"}, anchor="0.25(1+exp(-z))+0.75",
             notes="the source folds the fixed scale b into the inner "
                   "function; here it is folded into the vertical scale, "
                   "which expands to the same expression"),
        _rec("rsign", "sgn", gamma="neg(a)", domains={"a": _D33},
             anchor="sign function with horizontal shift"),
        _rec("paired_relu_1", "relu", beta="a", gamma="neg(b)",
             domains={"a": _D33, "b": _D33},
             anchor="outputs two values instead of one",
             notes="first component of the paired rectifier"),
        _rec("paired_relu_2", "relu", beta="c", gamma="neg(d)",
             domains={"c": _D33, "d": _D33},
             anchor="outputs two values instead of one",
             notes="second component of the paired rectifier"),
        _rec("mba_1", "relu", gamma="b", domains={"b": _D33}, direct="mba_k",
             anchor="multiple transforms applied to the same preactivation",
             notes="branch 1 of the multi-bias unit expanded at K = 2"),
        _rec("mba_2", "relu", gamma="b", domains={"b": _D33}, direct="mba_k",
             anchor="multiple transforms applied to the same preactivation",
             notes="branch 2 of the multi-bias unit expanded at K = 2"),
        _rec("shelu", "elu", gamma="b", domains={"a": _POS, "b": _D33},
             inner_fixed={"a": "a"},
             anchor="horizontal translation controlled by a fixed hyperparameter"),
        _rec("svelu", "elu", delta="b", domains={"a": _POS, "b": _D33},
             inner_fixed={"a": "a"},
             anchor="vertical translation instead of horizontal"),
        _rec("pshelu", "elu", alpha="a", beta="recip(b)", gamma="div(c,b)",
             domains={"a": _D33, "b": _D33, "c": _D33},
             anchor="combines the horizontal shift with the parametric slope"),
        _rec("psvelu", "elu", alpha="a", beta="recip(b)", delta="c",
             domains={"a": _D33, "b": _D33, "c": _D33},
             anchor="parametric variant of the vertical shift"),
        _rec("sh_hardtanh", "hard_tanh", gamma="neg(a)", domains={"a": _D33},
             anchor="fixed parameter for horizontal shifts"),
        _rec("sv_hardtanh", "hard_tanh", delta="a", domains={"a": _D33},
             anchor="fixed parameter for vertical shifts"),
        _rec("pfelu", "elu", delta="b", domains={"a": _POS, "b": _D33},
             inner_fixed={"a": "a"},
             anchor="adding a trainable parameter for vertical translation",
             notes="the parent activation's closed form is not reproduced in "
                   "the source text; the exponential-linear family stands in "
                   "for it, which exercises the same vertical-shift structure"),
        _rec("adaptive_hardtanh", "hard_tanh", beta="a", gamma="neg(mul(a,b))",
             domains={"a": _D33, "b": _D33},
             anchor="epoch dependent with a predefined schedule"),
        _rec("shape_autotuning_sigmoid", "double_bipolar", alpha="a", beta="neg(a)",
             domains={"a": _POS},
             anchor="controlling both the output range"),
        _rec("generalized_tanh", "bipolar_sigmoid", alpha="a", beta="neg(b)",
             domains={"a": _D33, "b": _D33},
             anchor="separates the parameters for controlling the amplitude"),
        _rec("trainable_amplitude", "tanh", alpha="a", delta="b",
             domains={"a": _D33, "b": _D33},
             anchor="control vertical scaling and translation",
             notes="applies to any inner function; registered against tanh"),
        _rec("slope_varying", "softplus", beta="a", domains={"a": _D33},
             anchor="class of slope varying",
             notes="applies to any inner function; registered against softplus"),
        _rec("svaf", "tanh", beta="a", domains={"a": _D33},
             anchor="slope varying with the hyperbolic tangent inner"),
        _rec("assf", "logistic_sigmoid", beta="a", domains={"a": _D33},
             anchor="slope varying with the logistic inner", direct="assf"),
        _rec("psigmoid", "logistic_sigmoid", alpha="a", beta="b",
             domains={"a": _D33, "b": _D33}, direct="scaled_sigmoid",
             anchor="the horizontal scaling parameter b is global"),
        _rec("swish", "silu", beta="a", domains={"a": _D33},
             anchor="uses parameter a_i for horizontal scaling",
             notes="binding beta = a over z*sigmoid(z) expands to "
                   "a*z*sigmoid(a*z); the commonly cited form is "
                   "z*sigmoid(a*z) -- the registered form follows the source"),
        _rec("ahaf", "silu", alpha="a", beta="b", domains={"a": _D33, "b": _D33},
             anchor="employs both vertical and horizontal scaling"),
        _rec("adaptive_slope_tanh", "tanh", beta="a", gamma="1", delta="1",
             domains={"a": _D33}, disputed=True,
             anchor="adaptive slope hyperbolic tangent",
             notes="printed with unit horizontal and vertical offsets although "
                   "described as a pure slope parameterization; stored as "
                   "printed and flagged"),
        _rec("pstanh", "pstanh_core", alpha="a", beta="b",
             domains={"a": _D33, "b": _D33},
             anchor="two scaling parameters"),
        _rec("ssinh", "sinh", alpha="a", beta="b", domains={"a": _D33, "b": _D33},
             anchor="two scaling parameters for the hyperbolic sine"),
        _rec("sexp", "exp_minus_one", alpha="a", beta="b",
             domains={"a": _D33, "b": _D33},
             anchor="uses exponential instead of the sinh"),
        _rec("pfts", "fts_core", gamma="1", delta="t", domains={"t": _D33},
             disputed=True,
             anchor="adaptive variant of the FTS",
             notes="printed with a unit horizontal offset although described "
                   "as a vertical-translation-only variant; stored as printed "
                   "and flagged"),
        _rec("parameterized_softplus", "softplus", delta="neg(a)",
             domains={"a": (0.0, 1.0)},
             anchor="delta in [-1, 0]",
             notes="vertical shift constrained to [-1, 0]"),
        _rec("scaled_logistic_sigmoid", "logistic_sigmoid", alpha="a", beta="b",
             domains={"a": _D33, "b": _D33}, direct="scaled_sigmoid",
             anchor="special case of previously proposed NAF"),
        _rec("erturul_af1", "logistic_sigmoid", beta="a", gamma="b",
             domains={"a": _D33, "b": _D33},
             anchor="networks are kept randomly initialized"),
        _rec("erturul_af2", "sin", beta="a", gamma="b",
             domains={"a": _D33, "b": _D33},
             anchor="networks are kept randomly initialized"),
        _rec("erturul_af3", "gauss_exp", beta="a", gamma="neg(mul(a,b))",
             domains={"a": _D33, "b": _D33},
             anchor="networks are kept randomly initialized"),
        _rec("erturul_af4", "step", beta="a", gamma="b",
             domains={"a": _D33, "b": _D33},
             anchor="1, z <= 0"),
    ]
    records.sort(key=lambda r: r.name)
    return tuple(records)


_BUILTIN = _build_records()


def builtin_records() -> tuple[EquivalenceRecord, ...]:
    return _BUILTIN


def active_records() -> tuple[EquivalenceRecord, ...]:
    """Builtin records, unless ``TAAF_REGISTRY`` points at a registry file."""
    path = os.environ.get(REGISTRY_ENV_VAR)
    if path:
        return load_records(path)
    return _BUILTIN


def list_records(disputed: bool | None = None,
                 records: tuple[EquivalenceRecord, ...] | None = None) -> list[EquivalenceRecord]:
    pool = active_records() if records is None else records
    out = [r for r in pool if disputed is None or r.disputed == disputed]
    return sorted(out, key=lambda r: r.name)


def get_record(name: str) -> EquivalenceRecord:
    for r in active_records():
        if r.name == name:
            return r
    raise KeyError(f"unknown equivalence record: {name!r}")


# --------------------------------------------------------------------------
# instantiation and verification

def _check_domains(record: EquivalenceRecord, binding: Mapping[str, float]) -> None:
    for name, lo, hi in record.param_domains:
        if name not in binding:
            raise OutOfDomainError(f"{record.name}: binding missing parameter {name!r}")
        v = binding[name]
        if not lo <= v <= hi:
            raise OutOfDomainError(
                f"{record.name}: {name}={v!r} outside domain [{lo}, {hi}]")


def instantiate(record: EquivalenceRecord, binding: Mapping[str, float]) -> TaafNode:
    _check_domains(record, binding)
    params = TaafParams(
        record.alpha.evaluate(binding),
        record.beta.evaluate(binding),
        record.gamma.evaluate(binding),
        record.delta.evaluate(binding),
    )
    fixed = {name: expr.evaluate(binding) for name, expr in record.inner_fixed}
    return TaafNode(params, record.inner_id, fixed)


def verify(record: EquivalenceRecord, binding: Mapping[str, float],
           grid: tuple[float, ...] = STANDARD_GRID,
           kink_radius: float = 1e-3) -> VerifyResult:
    """Worst absolute difference between the transform side and the direct
    closed form over the grid, skipping points near kinks of either side."""
    node = instantiate(record, binding)
    direct = _DIRECT[record.direct_id]
    skip = node.kinks_in_z()
    worst = 0.0
    worst_z = grid[0] if grid else math.nan
    checked = 0
    for z in grid:
        if any(abs(z - k) <= kink_radius for k in skip):
            continue
        diff = abs(taaf_eval(node, z) - direct(z, binding))
        checked += 1
        if diff > worst:
            worst, worst_z = diff, z
    return VerifyResult(max_abs_diff=worst, worst_z=worst_z, points_checked=checked)


def seeded_bindings(record: EquivalenceRecord, seed: int, count: int = 3) -> list[dict[str, float]]:
    """Reproducible in-domain bindings, sampled inside ``BINDING_RANGE`` with
    near-zero values excluded (degenerate scales)."""
    rng = random.Random(f"{seed}:{record.name}")
    out = []
    for _ in range(count):
        b = {}
        for name, lo, hi in record.param_domains:
            lo2, hi2 = max(lo, BINDING_RANGE[0]), min(hi, BINDING_RANGE[1])
            v = rng.uniform(lo2, hi2)
            while abs(v) < BINDING_EXCLUSION:
                v = rng.uniform(lo2, hi2)
            b[name] = v
        out.append(b)
    return out


# --------------------------------------------------------------------------
# registry file format

def _record_dict(r: EquivalenceRecord) -> dict:
    return {
        "name": r.name,
        "direct": r.direct_id,
        "inner": r.inner_id,
        "alpha": r.alpha.to_string(),
        "beta": r.beta.to_string(),
        "gamma": r.gamma.to_string(),
        "delta": r.delta.to_string(),
        "domains": {name: [lo, hi] for name, lo, hi in r.param_domains},
        "inner_fixed": {name: e.to_string() for name, e in r.inner_fixed},
        "disputed": r.disputed,
        "anchor": r.anchor,
        "notes": r.notes,
    }


def records_to_json(records=None) -> str:
    pool = active_records() if records is None else records
    return json.dumps([_record_dict(r) for r in pool], ensure_ascii=False, indent=2)


def records_from_json(text: str) -> tuple[EquivalenceRecord, ...]:
    out = []
    for d in json.loads(text):
        out.append(EquivalenceRecord(
            name=d["name"],
            direct_id=d["direct"],
            inner_id=d["inner"],
            alpha=parse_expr(d["alpha"]),
            beta=parse_expr(d["beta"]),
            gamma=parse_expr(d["gamma"]),
            delta=parse_expr(d["delta"]),
            param_domains=tuple((n, float(lo), float(hi))
                                for n, (lo, hi) in d["domains"].items()),
            inner_fixed=tuple((n, parse_expr(e))
                              for n, e in d.get("inner_fixed", {}).items()),
            disputed=bool(d.get("disputed", False)),
            anchor=d.get("anchor", ""),
            notes=d.get("notes", ""),
        ))
    return tuple(out)


def save_records(path: str, records=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(records_to_json(records))
        fh.write("\n")


def load_records(path: str) -> tuple[EquivalenceRecord, ...]:
    with open(path, encoding="utf-8") as fh:
        return records_from_json(fh.read())
