"""Central-difference oracle for every analytic derivative in the library.

The step rule is ``h = cbrt(machine epsilon) * max(1, |x|)``, which
balances truncation against rounding error for a second-order scheme.
Points near a kink are excluded: in input space for catalog entries, in
pre-activation space for transform nodes (mapped back through
``z = (u - gamma) / beta`` when beta is nonzero).  A node with beta == 0
is constant in z, so only ``d_z == 0`` is asserted for it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from . import catalog
from .engine import (
    CompositeNode,
    TaafNode,
    TaafParams,
    composite_eval,
    composite_grad,
    taaf_eval,
    taaf_grad,
)

_CBRT_EPS = (2.0 ** -52) ** (1.0 / 3.0)


@dataclass(frozen=True)
class FdPolicy:
    kink_exclusion_radius: float = 1e-3
    rel_tol: float = 1e-6
    abs_tol: float = 1e-8

    def __post_init__(self):
        if self.kink_exclusion_radius < 0:
            raise ValueError("kink_exclusion_radius must be >= 0")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")

    def step(self, x: float) -> float:
        return _CBRT_EPS * max(1.0, abs(x))


DEFAULT_POLICY = FdPolicy()


@dataclass(frozen=True)
class Failure:
    z: float
    partial: str
    analytic: float
    numeric: float
    error: float


@dataclass
class GradReport:
    subject: str
    points_checked: int
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "points_checked": self.points_checked,
            "passed": self.passed,
            "failures": [
                {"z": f.z, "partial": f.partial, "analytic": f.analytic,
                 "numeric": f.numeric, "error": f.error}
                for f in self.failures
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def central_diff(evaluate: Callable[[float], float], z: float,
                 policy: FdPolicy = DEFAULT_POLICY, h: float | None = None) -> float:
    if h is None:
        h = policy.step(z)
    hi = evaluate(z + h)
    lo = evaluate(z - h)
    if not (math.isfinite(hi) and math.isfinite(lo)):
        raise ArithmeticError(f"non-finite evaluation near z={z!r}")
    return (hi - lo) / (2.0 * h)


def convergence_factor(evaluate: Callable[[float], float], analytic: float,
                       z: float, h: float) -> float:
    """err(h) / err(h/2); ~4 for a second-order scheme at smooth points."""
    e1 = abs(central_diff(evaluate, z, h=h) - analytic)
    e2 = abs(central_diff(evaluate, z, h=h / 2.0) - analytic)
    return e1 / e2


def _mismatch(analytic: float, numeric: float, policy: FdPolicy) -> float | None:
    """Relative error when outside tolerance, else None."""
    diff = abs(analytic - numeric)
    err = diff / max(1.0, abs(analytic))
    if err <= policy.rel_tol or diff <= policy.abs_tol:
        return None
    return err


def _check_scalar(value_fn, deriv_fn, grid, exclusions, policy, report, label="d_z"):
    for z in grid:
        if any(abs(z - k) <= policy.kink_exclusion_radius for k in exclusions):
            continue
        analytic = deriv_fn(z)
        numeric = central_diff(value_fn, z, policy)
        report.points_checked += 1
        err = _mismatch(analytic, numeric, policy)
        if err is not None:
            report.failures.append(Failure(z, label, analytic, numeric, err))


def _params_with(params: TaafParams, name: str, v: float) -> TaafParams:
    return replace(params, **{name: v})


def _check_taaf_point(node: TaafNode, z: float, policy: FdPolicy, report: GradReport,
                      prefix: str = "") -> None:
    g = taaf_grad(node, z)
    probes: list[tuple[str, float, float, Callable[[float], float]]] = [
        ("d_z", g.d_z, z, lambda t: taaf_eval(node, t)),
    ]
    for name, analytic in (("alpha", g.d_alpha), ("beta", g.d_beta),
                           ("gamma", g.d_gamma), ("delta", g.d_delta)):
        def make(pname):
            return lambda t: taaf_eval(
                TaafNode(_params_with(node.params, pname, t), node.inner_id, node.inner_fixed), z)
        probes.append((f"d_{name}", analytic, getattr(node.params, name), make(name)))
    for label, analytic, x0, fn in probes:
        numeric = central_diff(fn, x0, policy)
        report.points_checked += 1
        err = _mismatch(analytic, numeric, policy)
        if err is not None:
            report.failures.append(Failure(z, prefix + label, analytic, numeric, err))


def _taaf_excluded(node: TaafNode, z: float, radius: float) -> bool:
    p = node.params
    u = p.beta * z + p.gamma
    return any(abs(u - k) <= radius
               for k in catalog.fd_exclusions(node.inner_id, node.inner_fixed))


def _check_taaf(node: TaafNode, grid, policy, report) -> None:
    if node.params.beta == 0.0:
        # constant in z: only d_z = 0 is meaningfully checkable
        for z in grid:
            g = taaf_grad(node, z)
            numeric = central_diff(lambda t: taaf_eval(node, t), z, policy)
            report.points_checked += 1
            err = _mismatch(g.d_z, numeric, policy)
            if err is not None:
                report.failures.append(Failure(z, "d_z", g.d_z, numeric, err))
        return
    for z in grid:
        if _taaf_excluded(node, z, policy.kink_exclusion_radius):
            continue
        _check_taaf_point(node, z, policy, report)


def _composite_skip(node: CompositeNode, z: float, radius: float) -> bool:
    if any(_taaf_excluded(b, z, radius) for b in node.branches):
        return True
    if node.kind == "max":
        values = sorted((taaf_eval(b, z) for b in node.branches), reverse=True)
        if values[0] - values[1] <= radius:  # near-tie acts like a kink
            return True
    return False


def _check_composite(node: CompositeNode, grid, policy, report) -> None:

    for z in grid:
        if _composite_skip(node, z, policy.kink_exclusion_radius):
            continue
        g = composite_grad(node, z)
        numeric = central_diff(lambda t: composite_eval(node, t), z, policy)
        report.points_checked += 1
        err = _mismatch(g.d_z, numeric, policy)
        if err is not None:
            report.failures.append(Failure(z, "d_z", g.d_z, numeric, err))
        for i, (branch, bg) in enumerate(zip(node.branches, g.branches)):
            if node.kind == "max":
                win = [taaf_eval(b, z) for b in node.branches]
                if i != win.index(max(win)):
                    continue  # inactive branch partials are identically zero
            for name, analytic in (("alpha", bg.d_alpha), ("beta", bg.d_beta),
                                   ("gamma", bg.d_gamma), ("delta", bg.d_delta)):
                def probe(t, i=i, name=name):
                    branches = list(node.branches)
                    b = branches[i]
                    branches[i] = TaafNode(_params_with(b.params, name, t), b.inner_id, b.inner_fixed)
                    return composite_eval(CompositeNode(node.kind, tuple(branches), node.weights), z)
                x0 = getattr(branch.params, name)
                numeric = central_diff(probe, x0, policy)
                report.points_checked += 1
                err = _mismatch(analytic, numeric, policy)
                if err is not None:
                    report.failures.append(Failure(z, f"branch{i}.d_{name}", analytic, numeric, err))
        if node.kind == "weighted_average":
            for i, analytic in enumerate(g.d_weights):
                def probe_w(t, i=i):
                    weights = list(node.weights)
                    weights[i] = t
                    return composite_eval(CompositeNode(node.kind, node.branches, tuple(weights)), z)
                numeric = central_diff(probe_w, node.weights[i], policy)
                report.points_checked += 1
                err = _mismatch(analytic, numeric, policy)
                if err is not None:
                    report.failures.append(Failure(z, f"d_w{i}", analytic, numeric, err))


def check(subject: str | TaafNode | CompositeNode, grid: Sequence[float],
          policy: FdPolicy = DEFAULT_POLICY) -> GradReport:
    """Compare every analytic partial of ``subject`` against central
    differences over ``grid``; failures are data, not exceptions."""
    if isinstance(subject, str):
        report = GradReport(subject=subject, points_checked=0)
        fv, fd = catalog.bind(subject)
        _check_scalar(fv, fd, grid, catalog.fd_exclusions(subject), policy, report)
    elif isinstance(subject, TaafNode):
        report = GradReport(subject=f"taaf:{subject.inner_id}", points_checked=0)
        _check_taaf(subject, grid, policy, report)
    elif isinstance(subject, CompositeNode):
        report = GradReport(subject=f"{subject.kind}:{len(subject.branches)}", points_checked=0)
        _check_composite(subject, grid, policy, report)
    else:
        raise TypeError(f"unsupported subject: {type(subject).__name__}")
    report.failures.sort(key=lambda f: (f.z, f.partial))
    return report
