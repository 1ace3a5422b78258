"""Fig-tree/wasp coevolution optimizer, benchmark suite, and statistics harness."""

from .core import (
    Bounds,
    EvalContext,
    ObjectiveProblem,
    RandomStream,
    clamp_to_bounds,
    derive_seed,
    evaluate,
    uniform_in_box,
)
from .engine import FwscParams, RunResult, run

__all__ = [
    "Bounds",
    "EvalContext",
    "ObjectiveProblem",
    "RandomStream",
    "clamp_to_bounds",
    "derive_seed",
    "evaluate",
    "uniform_in_box",
    "FwscParams",
    "RunResult",
    "run",
]
