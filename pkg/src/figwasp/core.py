"""Problem model, bounds arithmetic, and the seeded random-stream contract.

Everything downstream (engine, benchmarks, harness) builds on three pieces:
a validated box-constraint type, an objective wrapper with an evaluation
counter, and a counter-based random stream so that any run is reproducible
from a single 64-bit seed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Vector = np.ndarray

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Bounds:
    """Per-dimension box constraints with strict lower < upper."""

    lower: Vector
    upper: Vector

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or upper.ndim != 1:
            raise ValueError("bounds must be 1-D vectors")
        if lower.shape != upper.shape:
            raise ValueError("lower and upper must have the same length")
        if not np.all(lower < upper):
            raise ValueError("degenerate bounds: need lower < upper in every dimension")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @classmethod
    def symmetric(cls, half_width: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, -half_width), np.full(dimension, half_width))

    @classmethod
    def box(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, low), np.full(dimension, high))

    def contains(self, position: Vector) -> bool:
        return bool(np.all(position >= self.lower) and np.all(position <= self.upper))

    def neighborhood(self, center: Vector, radius: float) -> "Bounds":
        """[center - radius, center + radius] intersected with this box.

        A radius below the center's floating-point spacing would produce a
        zero-width interval; such dimensions are widened by one ulp (staying
        inside the box) so the result is always a valid Bounds.
        """
        lo = np.maximum(center - radius, self.lower)
        hi = np.minimum(center + radius, self.upper)
        degenerate = lo >= hi
        if np.any(degenerate):
            hi = np.where(degenerate, np.minimum(np.nextafter(hi, np.inf), self.upper), hi)
            degenerate = lo >= hi
            lo = np.where(degenerate, np.maximum(np.nextafter(lo, -np.inf), self.lower), lo)
        return Bounds(lo, hi)


@dataclass(frozen=True)
class ObjectiveProblem:
    """A box-constrained minimization problem.

    ``objective`` maps a position vector to a scalar. Stochastic objectives
    carry an extra ``noise`` hook drawing from the caller's stream, so runs
    stay reproducible (noise never comes from a global source).
    """

    name: str
    dimension: int
    bounds: Bounds
    objective: Callable[[Vector], float]
    noise: Callable[["RandomStream"], float] | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.bounds.dimension != self.dimension:
            raise ValueError("bounds dimension does not match problem dimension")


class RandomStream:
    """Counter-based (Philox) random stream owned by exactly one run.

    Identical seeds yield identical draw sequences; independent runs derive
    independent streams from (master seed, run index) via `derive_seed`.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = np.random.Generator(np.random.Philox(key=self.seed))

    def uniform(self, size=None):
        """Uniform draws on [0, 1)."""
        return self._gen.random(size)

    def uniform_between(self, low, high, size=None):
        low = np.asarray(low, dtype=float)
        high = np.asarray(high, dtype=float)
        return low + self._gen.random(size) * (high - low)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def choose_without_replacement(self, n: int, k: int) -> np.ndarray:
        return self._gen.choice(n, size=k, replace=False)


@dataclass
class EvalContext:
    """Per-run context: the run's stream plus its evaluation counter."""

    rng: RandomStream | None = None
    evaluations: int = 0


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit seed from a master seed and arbitrary labels.

    Hash-based so that adding problems to a campaign never shifts the seeds
    of the other problems' runs.
    """
    text = "|".join([str(int(master_seed))] + [str(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK64


def evaluate(problem: ObjectiveProblem, position: Vector, ctx: EvalContext | None = None) -> float:
    """Evaluate the objective at ``position``, counting against ``ctx``.

    Positions must already lie inside the problem bounds; internal callers
    clamp before evaluating, so a violation here is a caller bug.
    """
    position = np.asarray(position, dtype=float)
    if position.shape != (problem.dimension,):
        raise ValueError(
            f"position has length {position.shape}, problem dimension is {problem.dimension}"
        )
    if not problem.bounds.contains(position):
        raise ValueError(f"position outside bounds for {problem.name}")
    value = float(problem.objective(position))
    if problem.noise is not None:
        if ctx is None or ctx.rng is None:
            raise ValueError(f"{problem.name} is stochastic and needs a RandomStream to evaluate")
        value += float(problem.noise(ctx.rng))
    if ctx is not None:
        ctx.evaluations += 1
    return value


def clamp_to_bounds(position: Vector, bounds: Bounds) -> Vector:
    """Project each coordinate onto [lower, upper]; identity on feasible input."""
    return np.clip(np.asarray(position, dtype=float), bounds.lower, bounds.upper)


def uniform_in_box(rng: RandomStream, lower: Vector, upper: Vector) -> Vector:
    """Independent uniform draw per dimension on [lower_i, upper_i].

    Zero-width intervals are allowed and return the exact point.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape:
        raise ValueError("lower and upper must have the same length")
    return lower + rng.uniform(size=lower.shape) * (upper - lower)
