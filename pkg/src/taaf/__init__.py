"""Adaptive activation transforms over a catalog of scalar activations.

The transform is ``g(z) = alpha * f(beta * z + gamma) + delta`` with four
trainable parameters wrapping any inner function ``f``.  Subpackages:

* :mod:`taaf.catalog` -- activation functions with analytic derivatives
* :mod:`taaf.engine` -- the transform, its partials, composite units
* :mod:`taaf.registry` -- named activations that reduce to the transform
* :mod:`taaf.gradcheck` -- central-difference derivative verification
* :mod:`taaf.trainer` -- planted-parameter recovery by gradient descent
* :mod:`taaf.bench` -- evaluation throughput benchmarks
* :mod:`taaf.kernels` -- compiled/numpy batch backends (internal)
"""

from .catalog import describe, derivative, value
from .engine import (
    CompositeNode,
    TaafGradient,
    TaafNode,
    TaafParams,
    composite_eval,
    composite_grad,
    neuron_forward,
    taaf_eval,
    taaf_grad,
)
from .gradcheck import FdPolicy, GradReport, central_diff, check
from .registry import EquivalenceRecord, instantiate, list_records, verify
from .trainer import Dataset, FitReport, TrainConfig, fit, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "CompositeNode",
    "Dataset",
    "EquivalenceRecord",
    "FdPolicy",
    "FitReport",
    "GradReport",
    "TaafGradient",
    "TaafNode",
    "TaafParams",
    "TrainConfig",
    "central_diff",
    "check",
    "composite_eval",
    "composite_grad",
    "derivative",
    "describe",
    "fit",
    "generate_synthetic",
    "instantiate",
    "list_records",
    "neuron_forward",
    "taaf_eval",
    "taaf_grad",
    "value",
    "verify",
    "__version__",
]
