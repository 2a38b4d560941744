"""Four-parameter adaptive transform of an inner activation.

The transform is ``g(z) = alpha * f(beta * z + gamma) + delta`` for any
catalog function ``f``.  This module evaluates it, provides the five
analytic partials (to z and to the four parameters), the neuron-output
form over a weighted input sum, and composite units (sum / max / weighted
average of transformed branches).  Nodes are immutable values; everything
here is a pure function, safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import catalog

__all__ = [
    "CompositeGradient",
    "CompositeNode",
    "TaafGradient",
    "TaafNode",
    "TaafParams",
    "composite_eval",
    "composite_grad",
    "from_json",
    "neuron_forward",
    "taaf_eval",
    "taaf_grad",
    "to_json",
]

COMPOSITE_KINDS = ("sum", "max", "weighted_average")


class ZeroWeightSumError(ValueError):
    """Weighted average with weights summing to zero."""


@dataclass(frozen=True)
class TaafParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"TaafParams.{name} must be finite, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)


@dataclass(frozen=True)
class TaafNode:
    params: TaafParams
    inner_id: str
    inner_fixed: Mapping[str, float] = field(default_factory=dict)
    _value: Callable = field(init=False, repr=False, compare=False)
    _deriv: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fv, fd = catalog.bind(self.inner_id, self.inner_fixed)
        object.__setattr__(self, "inner_fixed", dict(self.inner_fixed))
        object.__setattr__(self, "_value", fv)
        object.__setattr__(self, "_deriv", fd)

    def kinks_in_z(self) -> tuple[float, ...]:
        """Inner kinks mapped to input space; empty when beta == 0."""
        beta, gamma = self.params.beta, self.params.gamma
        if beta == 0.0:
            return ()
        return tuple((k - gamma) / beta for k in catalog.kinks_for(self.inner_id, self.inner_fixed))


@dataclass(frozen=True)
class TaafGradient:
    d_z: float
    d_alpha: float
    d_beta: float
    d_gamma: float
    d_delta: float


@dataclass(frozen=True)
class CompositeNode:
    kind: str
    branches: tuple[TaafNode, ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.kind not in COMPOSITE_KINDS:
            raise ValueError(f"composite kind must be one of {COMPOSITE_KINDS}, got {self.kind!r}")
        if not self.branches:
            raise ValueError("composite needs at least one branch")
        if self.kind == "max" and len(self.branches) < 2:
            raise ValueError("max composite needs at least two branches")
        if self.kind == "weighted_average":
            if self.weights is None or len(self.weights) != len(self.branches):
                raise ValueError("weighted_average needs one weight per branch")
            if sum(self.weights) == 0.0:
                raise ZeroWeightSumError("weighted_average weights sum to zero")
        elif self.weights is not None:
            raise ValueError(f"{self.kind} composite takes no weights")


def taaf_eval(node: TaafNode, z: float) -> float:
    p = node.params
    u = p.beta * z + p.gamma
    return catalog.clamp_finite(p.alpha * node._value(u) + p.delta)


def taaf_grad(node: TaafNode, z: float) -> TaafGradient:
    p = node.params
    u = p.beta * z + p.gamma
    fv = node._value(u)
    fd = node._deriv(u)
    c = catalog.clamp_finite
    return TaafGradient(
        d_z=c(p.alpha * p.beta * fd),
        d_alpha=c(fv),
        d_beta=c(p.alpha * fd * z),
        d_gamma=c(p.alpha * fd),
        d_delta=1.0,
    )


def composite_eval(node: CompositeNode, z: float) -> float:
    values = [taaf_eval(b, z) for b in node.branches]
    if node.kind == "sum":
        return catalog.clamp_finite(sum(values))
    if node.kind == "max":
        return max(values)
    den = sum(node.weights)
    if den == 0.0:
        raise ZeroWeightSumError("weighted_average weights sum to zero")
    num = sum(w * v for w, v in zip(node.weights, values))
    return catalog.clamp_finite(num / den)


_ZERO_GRAD = TaafGradient(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CompositeGradient:
    branches: tuple[TaafGradient, ...]
    d_z: float
    d_weights: tuple[float, ...] | None = None


def _scaled(g: TaafGradient, s: float) -> TaafGradient:
    return TaafGradient(s * g.d_z, s * g.d_alpha, s * g.d_beta, s * g.d_gamma, s * g.d_delta)


def composite_grad(node: CompositeNode, z: float) -> CompositeGradient:
    grads = [taaf_grad(b, z) for b in node.branches]
    if node.kind == "sum":
        return CompositeGradient(tuple(grads), d_z=sum(g.d_z for g in grads))
    if node.kind == "max":
        values = [taaf_eval(b, z) for b in node.branches]
        winner = 0
        for i in range(1, len(values)):
            if values[i] > values[winner]:  # ties stay with the lowest index
                winner = i
        out = [g if i == winner else _ZERO_GRAD for i, g in enumerate(grads)]
        return CompositeGradient(tuple(out), d_z=grads[winner].d_z)
    den = sum(node.weights)
    if den == 0.0:
        raise ZeroWeightSumError("weighted_average weights sum to zero")
    values = [taaf_eval(b, z) for b in node.branches]
    avg = sum(w * v for w, v in zip(node.weights, values)) / den
    out = [_scaled(g, w / den) for w, g in zip(node.weights, grads)]
    d_z = sum(w * g.d_z for w, g in zip(node.weights, grads)) / den
    d_weights = tuple((v - avg) / den for v in values)
    return CompositeGradient(tuple(out), d_z=d_z, d_weights=d_weights)


def neuron_forward(weights: Sequence[float], inputs: Sequence[float], node: TaafNode) -> float:
    if len(weights) != len(inputs):
        raise ValueError(f"length mismatch: {len(weights)} weights vs {len(inputs)} inputs")
    if len(weights) == 0:
        raise ValueError("neuron needs at least one input")
    s = 0.0
    for w, x in zip(weights, inputs):
        s += w * x
    return taaf_eval(node, s)


# --------------------------------------------------------------------------
# serialization: round-trip stable JSON, shortest round-trip decimals

def _node_dict(node: TaafNode | CompositeNode) -> dict:
    if isinstance(node, TaafNode):
        p = node.params
        return {
            "kind": "taaf",
            "params": {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "delta": p.delta},
            "inner": node.inner_id,
            "fixed": dict(node.inner_fixed),
        }
    out = {
        "kind": node.kind,
        "branches": [_node_dict(b) for b in node.branches],
    }
    if node.weights is not None:
        out["weights"] = list(node.weights)
    return out


def to_json(node: TaafNode | CompositeNode) -> str:
    return json.dumps(_node_dict(node), ensure_ascii=False)


def _node_from_dict(d: dict) -> TaafNode | CompositeNode:
    kind = d["kind"]
    if kind == "taaf":
        p = d["params"]
        return TaafNode(
            TaafParams(float(p["alpha"]), float(p["beta"]), float(p["gamma"]), float(p["delta"])),
            d["inner"],
            {k: float(v) for k, v in d.get("fixed", {}).items()},
        )
    return CompositeNode(
        kind,
        tuple(_node_from_dict(b) for b in d["branches"]),
        tuple(float(w) for w in d["weights"]) if "weights" in d else None,
    )


def from_json(text: str) -> TaafNode | CompositeNode:
    return _node_from_dict(json.loads(text))
