"""Toy full-batch gradient-descent harness for planted-parameter recovery.

Synthetic data comes from a known transform node applied to a weighted
input sum; training starts from the identity parameterization (1, 1, 0, 0)
so the model begins as the plain inner function, and descends the
mean-squared error.  Recovery is judged up to the sign symmetry of odd
inner functions: (alpha, beta, gamma, delta) and (-alpha, -beta, -gamma,
delta) define the same function when f is odd.

Inputs are drawn uniformly from [-2, 2]^dim with Python's Mersenne
Twister; Gaussian noise uses an explicit Box-Muller transform
(z = sqrt(-2 ln u1) * cos(2 pi u2), two uniforms per draw) so the data
stream is reproducible from the seed alone.  The epoch loop is
single-threaded and deterministic; batches are vectorized internally
through the kernels backend.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from . import catalog, kernels
from .engine import TaafNode, TaafParams, neuron_forward

__all__ = [
    "Dataset",
    "FitReport",
    "TrainConfig",
    "TrainingDivergedError",
    "fit",
    "generate_synthetic",
    "loss_curve_csv",
]

ALL_TRAINABLE = frozenset({"alpha", "beta", "gamma", "delta", "weights"})


class TrainingDivergedError(RuntimeError):
    """Training reached a non-finite loss."""


@dataclass(frozen=True)
class Dataset:
    inputs: tuple[tuple[float, ...], ...]
    targets: tuple[float, ...]
    seed: int
    noise_sigma: float
    planted_node: TaafNode | None = None
    planted_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.inputs) != len(self.targets) or not self.inputs:
            raise ValueError("inputs and targets must have equal, nonzero length")
        if not all(math.isfinite(v) for row in self.inputs for v in row) or \
                not all(math.isfinite(y) for y in self.targets):
            raise ValueError("dataset values must be finite")

    def to_json(self) -> str:
        d = {
            "inputs": [list(row) for row in self.inputs],
            "targets": list(self.targets),
            "seed": self.seed,
            "noise_sigma": self.noise_sigma,
        }
        return json.dumps(d, ensure_ascii=False)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    init: TaafParams = TaafParams(1.0, 1.0, 0.0, 0.0)
    init_weights: tuple[float, ...] | None = None  # defaults to all ones
    train_mask: frozenset[str] = ALL_TRAINABLE
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.learning_rate) or self.learning_rate <= 0:
            raise ValueError("learning_rate must be a positive finite real")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        unknown = set(self.train_mask) - ALL_TRAINABLE
        if unknown:
            raise ValueError(f"unknown train_mask entries: {sorted(unknown)}")


@dataclass
class FitReport:
    final_params: TaafParams
    final_weights: tuple[float, ...]
    loss_curve: list[float]
    recovered: bool

    @property
    def final_mse(self) -> float:
        return self.loss_curve[-1]

    def to_dict(self) -> dict:
        p = self.final_params
        return {
            "final_params": {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "delta": p.delta},
            "final_weights": list(self.final_weights),
            "recovered": self.recovered,
            "final_mse": self.final_mse,
            "loss_curve": self.loss_curve,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def _box_muller(rng: random.Random) -> float:
    u1 = 1.0 - rng.random()  # (0, 1]: keeps the log argument positive
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def generate_synthetic(target: TaafNode, weights, n: int, seed: int,
                       noise_sigma: float = 0.0) -> Dataset:
    if n < 1:
        raise ValueError("need at least one sample")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    weights = tuple(float(w) for w in weights)
    rng = random.Random(seed)
    inputs = tuple(tuple(rng.uniform(-2.0, 2.0) for _ in weights) for _ in range(n))
    targets = []
    for row in inputs:
        y = neuron_forward(weights, row, target)
        if noise_sigma > 0.0:
            y += noise_sigma * _box_muller(rng)
        targets.append(y)
    return Dataset(inputs, tuple(targets), seed, noise_sigma,
                   planted_node=target, planted_weights=weights)


def _recovered(final: TaafParams, planted: TaafParams, inner_id: str, tol: float) -> bool:
    candidates = [planted.as_tuple()]
    if catalog.is_odd(inner_id):
        a, b, g, d = planted.as_tuple()
        candidates.append((-a, -b, -g, d))
    got = final.as_tuple()
    return any(all(abs(x - y) <= tol for x, y in zip(got, cand)) for cand in candidates)


def fit(data: Dataset, inner_id: str, config: TrainConfig,
        recover_tol: float = 0.05) -> FitReport:
    """Full-batch gradient descent on the mean-squared error.

    The loss curve has ``epochs + 1`` entries (initial loss first); a
    non-finite loss aborts with :class:`TrainingDivergedError`.
    """
    catalog.describe(inner_id)  # validate the id up front
    X = np.asarray(data.inputs, dtype=np.float64)
    y = np.asarray(data.targets, dtype=np.float64)
    n, dim = X.shape
    w = np.ones(dim) if config.init_weights is None else np.asarray(config.init_weights, float)
    if w.shape != (dim,):
        raise ValueError(f"init_weights must have length {dim}")
    alpha, beta, gamma, delta = config.init.as_tuple()
    lr = config.learning_rate
    mask = config.train_mask

    loss_curve: list[float] = []
    with np.errstate(over="ignore", invalid="ignore"):  # divergence raises below
        for epoch in range(config.epochs + 1):
            s = X @ w
            u = beta * s + gamma
            fu = kernels.eval_values(inner_id, None, u)
            r = (alpha * fu + delta) - y
            mse = float(r @ r) / n
            loss_curve.append(mse)
            if not math.isfinite(mse):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch}: {mse!r}")
            if epoch == config.epochs:
                break
            fpu = kernels.eval_derivs(inner_id, None, u)
            common = (2.0 / n) * r
            afpu = alpha * fpu
            # simultaneous update: all gradients use the pre-update state
            g_alpha = float(common @ fu)
            g_beta = float(common @ (afpu * s))
            g_gamma = float(common @ afpu)
            g_delta = float(np.sum(common))
            g_w = X.T @ (common * (afpu * beta))
            if "alpha" in mask:
                alpha -= lr * g_alpha
            if "beta" in mask:
                beta -= lr * g_beta
            if "gamma" in mask:
                gamma -= lr * g_gamma
            if "delta" in mask:
                delta -= lr * g_delta
            if "weights" in mask:
                w = w - lr * g_w

    final = TaafParams(alpha, beta, gamma, delta)
    recovered = False
    if data.planted_node is not None and data.planted_node.inner_id == inner_id:
        recovered = _recovered(final, data.planted_node.params, inner_id, recover_tol)
    return FitReport(final_params=final, final_weights=tuple(float(v) for v in w),
                     loss_curve=loss_curve, recovered=recovered)


def loss_curve_csv(report: FitReport) -> str:
    lines = ["epoch,mse"]
    lines.extend(f"{i},{mse!r}" for i, mse in enumerate(report.loss_curve))
    return "\n".join(lines) + "\n"
