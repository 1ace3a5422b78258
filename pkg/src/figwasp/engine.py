"""Fig-tree / wasp symbiotic coevolution search.

One generation works on a three-level population: trees mark candidate
regions, figs are sub-regions sampled inside each tree's neighborhood, and
wasps are evaluated points inside each fig. Wasp mating produces offspring
at female midpoints, the offspring pool is re-spread across its own
per-dimension envelope, an occasional "wind" kick inflates a fraction of
the pool, and the best pool members seed the next generation's trees. The
neighborhood radius shrinks with the iteration count, so the search
narrows from global exploration to local refinement.

All randomness flows through one `RandomStream`, so a run is a pure
function of (problem, params, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np

from .core import (
    Bounds,
    EvalContext,
    ObjectiveProblem,
    RandomStream,
    Vector,
    clamp_to_bounds,
    evaluate,
    uniform_in_box,
)

# Decay horizon for the neighborhood radius, as a multiple of the iteration
# budget, when no explicit decay_scale is configured. Calibrated on pilot
# campaigns (Sphere/Griewank at dimension 30, 500 generations): horizons at
# or above the budget keep the radius effectively constant and stall
# refinement many orders of magnitude short of the quality gates, while
# horizons under ~1/25 of the budget freeze the population before it can
# travel to the optimum basin.
DEFAULT_DECAY_FACTOR = 0.05


@dataclass
class FwscParams:
    """Algorithm parameters; defaults follow the reference configuration."""

    num_trees: int = 3
    figs_per_tree: int = 4
    wasps_per_fig: int = 8
    eta0: float = 0.8
    wind_threshold: float = 0.5
    wind_fraction: float = 0.10
    max_iterations: int = 500
    decay_scale: float | None = None
    stagnation_window: int | None = None

    def __post_init__(self):
        if self.num_trees < 1:
            raise ValueError("num_trees must be positive")
        if self.figs_per_tree < 1:
            raise ValueError("figs_per_tree must be positive")
        if self.wasps_per_fig < 2 or self.wasps_per_fig % 2 != 0:
            raise ValueError("wasps_per_fig must be an even integer >= 2")
        if self.num_trees > self.num_trees * self.figs_per_tree * (self.wasps_per_fig // 2):
            raise ValueError("offspring pool smaller than the number of trees")
        if self.eta0 <= 0:
            raise ValueError("eta0 must be positive")
        if not 0.0 <= self.wind_threshold <= 1.0:
            raise ValueError("wind_threshold must lie in [0, 1]")
        if not 0.0 <= self.wind_fraction <= 1.0:
            raise ValueError("wind_fraction must lie in [0, 1]")
        # max_iterations == 0 is the degenerate sample-only budget used by
        # the harness; it evaluates one wasp population and selects nothing.
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.decay_scale is not None and self.decay_scale <= 0:
            raise ValueError("decay_scale must be positive")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise ValueError("stagnation_window must be a positive integer")

    def effective_decay_scale(self) -> float:
        if self.decay_scale is not None:
            return float(self.decay_scale)
        return DEFAULT_DECAY_FACTOR * max(self.max_iterations, 1)


@dataclass
class Tree:
    position: Vector
    local_bounds: Bounds


@dataclass
class Wasp:
    position: Vector
    fitness: float
    sex: Literal["female", "male"]


@dataclass
class Fig:
    position: Vector
    local_bounds: Bounds
    wasps: list[Wasp] = field(default_factory=list)


@dataclass
class MatingGrid:
    """Females sorted ascending by fitness; ties keep their original order."""

    females: list[Wasp]

    def cells(self) -> list[tuple[float, float]]:
        """The closed fitness intervals bracketing male fitness values.

        A single female yields one degenerate cell.
        """
        fits = [w.fitness for w in self.females]
        if len(fits) == 1:
            return [(fits[0], fits[0])]
        return list(zip(fits[:-1], fits[1:]))


class OffspringPool:
    """Flat offspring collection plus its per-dimension min/max envelope."""

    def __init__(self, positions: np.ndarray):
        positions = np.asarray(positions, dtype=float)
        if positions.ndim != 2 or positions.shape[0] == 0:
            raise ValueError("pool needs at least one offspring")
        self.positions = positions
        self.envelope_min = positions.min(axis=0)
        self.envelope_max = positions.max(axis=0)

    def __len__(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class RunResult:
    best_position: Vector
    best_fitness: float
    trace: np.ndarray
    evaluations: int
    seed: int
    iterations_run: int


class GenerationSnapshot(NamedTuple):
    iteration: int
    trees: list[Tree]
    pool: OffspringPool
    best_so_far: float


def neighborhood_width(k: int, params: FwscParams) -> float:
    """Shrinking neighborhood radius eta0 * exp(1 - k / decay_scale)."""
    if k < 0:
        raise ValueError("iteration index must be >= 0")
    return params.eta0 * math.exp(1.0 - k / params.effective_decay_scale())


def spawn_trees(rng: RandomStream, problem: ObjectiveProblem, params: FwscParams, eta: float) -> list[Tree]:
    """Plant trees uniformly over the global box, wobbled by +-eta per dimension."""
    gb = problem.bounds
    trees = []
    for _ in range(params.num_trees):
        base = uniform_in_box(rng, gb.lower, gb.upper)
        wobble = rng.uniform_between(-eta, eta, size=base.shape)
        pos = clamp_to_bounds(base + wobble, gb)
        trees.append(Tree(position=pos, local_bounds=gb.neighborhood(pos, eta)))
    return trees


def spawn_figs(
    rng: RandomStream,
    tree: Tree,
    params: FwscParams,
    eta: float,
    global_bounds: Bounds,
) -> list[Fig]:
    """Grow figs uniformly inside the tree's neighborhood, wobbled by +-eta."""
    figs = []
    for _ in range(params.figs_per_tree):
        base = uniform_in_box(rng, tree.local_bounds.lower, tree.local_bounds.upper)
        wobble = rng.uniform_between(-eta, eta, size=base.shape)
        pos = clamp_to_bounds(base + wobble, global_bounds)
        figs.append(Fig(position=pos, local_bounds=global_bounds.neighborhood(pos, eta)))
    return figs


def spawn_wasps(
    rng: RandomStream,
    problem: ObjectiveProblem,
    fig: Fig,
    params: FwscParams,
    ctx: EvalContext | None = None,
) -> list[Wasp]:
    """Hatch W wasps uniformly inside the fig, evaluate them, and split the
    brood into W/2 females and W/2 males by a uniform random partition."""
    w = params.wasps_per_fig
    lo, hi = fig.local_bounds.lower, fig.local_bounds.upper
    positions = lo + rng.uniform(size=(w, problem.dimension)) * (hi - lo)
    fitnesses = [evaluate(problem, positions[i], ctx) for i in range(w)]
    females = set(np.sort(rng.permutation(w)[: w // 2]).tolist())
    return [
        Wasp(
            position=positions[i],
            fitness=fitnesses[i],
            sex="female" if i in females else "male",
        )
        for i in range(w)
    ]


def build_mating_grid(females: Sequence[Wasp]) -> MatingGrid:
    """Sort females ascending by fitness (stable on ties)."""
    if len(females) == 0:
        raise ValueError("mating grid needs at least one female")
    fits = np.array([w.fitness for w in females])
    order = np.argsort(fits, kind="stable")
    return MatingGrid(females=[females[i] for i in order])


def mate(grid: MatingGrid, males: Sequence[Wasp]) -> np.ndarray:
    """One offspring per male: the coordinate-wise midpoint of the two grid
    females whose fitness interval brackets the male's fitness.

    Males below the first female's fitness use the first interval, males
    above the last use the last, and a male tying a female's fitness takes
    the first (lowest) matching interval.
    """
    if len(grid.females) == 0:
        raise ValueError("empty mating grid")
    fem_pos = np.stack([w.position for w in grid.females])
    n_females = fem_pos.shape[0]
    if len(males) == 0:
        return np.empty((0, fem_pos.shape[1]))
    if n_females == 1:
        return np.repeat(fem_pos, len(males), axis=0)
    fem_fits = np.array([w.fitness for w in grid.females])
    male_fits = np.array([w.fitness for w in males])
    cell = np.searchsorted(fem_fits, male_fits, side="left") - 1
    cell = np.clip(cell, 0, n_females - 2)
    return (fem_pos[cell] + fem_pos[cell + 1]) / 2.0


def pool_offsprings(offspring_blocks: Sequence[np.ndarray]) -> OffspringPool:
    """Flatten every fig's offspring into one pool and take its envelope."""
    blocks = [b for b in offspring_blocks if len(b)]
    if not blocks:
        raise ValueError("no offspring to pool")
    return OffspringPool(np.concatenate(blocks, axis=0))


def search_directions(rng: RandomStream, pool: OffspringPool, global_bounds: Bounds) -> OffspringPool:
    """Re-spread every offspring uniformly across the pool envelope.

    Each coordinate is redrawn on [envelope_min_i, envelope_max_i], which
    keeps the pool inside its own convex bounding box while decorrelating
    offspring from their parents' figs.
    """
    width = pool.envelope_max - pool.envelope_min
    fresh = pool.envelope_min + rng.uniform(size=pool.positions.shape) * width
    return OffspringPool(np.clip(fresh, global_bounds.lower, global_bounds.upper))


def wind_count(pool_size: int, wind_fraction: float) -> int:
    return math.ceil(wind_fraction * pool_size)


def wind_effect(
    rng: RandomStream,
    pool: OffspringPool,
    params: FwscParams,
    global_bounds: Bounds,
) -> OffspringPool:
    """Occasionally drift a fixed fraction of the pool.

    One gate uniform is drawn per iteration; when it falls at or below the
    wind threshold, ceil(wind_fraction * |pool|) offspring chosen without
    replacement get every coordinate inflated by x <- x + x * rand(0, 1).
    """
    gate = rng.uniform()
    if params.wind_threshold <= 0.0 or gate > params.wind_threshold:
        return pool
    m = wind_count(len(pool), params.wind_fraction)
    if m == 0:
        return pool
    idx = np.sort(rng.choose_without_replacement(len(pool), m))
    drifted = pool.positions.copy()
    kick = rng.uniform(size=(m, drifted.shape[1]))
    drifted[idx] = drifted[idx] * (1.0 + kick)
    return OffspringPool(np.clip(drifted, global_bounds.lower, global_bounds.upper))


def select_trees(
    problem: ObjectiveProblem,
    pool: OffspringPool,
    count: int,
    eta: float,
    ctx: EvalContext | None = None,
) -> tuple[list[Tree], np.ndarray]:
    """Evaluate the whole pool and keep the ``count`` fittest as new trees.

    Ties break toward the lower pool index. Returns the new trees plus the
    full pool fitness vector so callers can track the generation's best
    without re-evaluating.
    """
    if len(pool) < count:
        raise ValueError(f"pool of {len(pool)} cannot seed {count} trees")
    fitnesses = np.array([evaluate(problem, p, ctx) for p in pool.positions])
    order = np.argsort(fitnesses, kind="stable")[:count]
    trees = [
        Tree(
            position=pool.positions[i].copy(),
            local_bounds=problem.bounds.neighborhood(pool.positions[i], eta),
        )
        for i in order
    ]
    return trees, fitnesses


def run(
    problem: ObjectiveProblem,
    params: FwscParams,
    seed: int,
    on_generation: Callable[[GenerationSnapshot], None] | None = None,
) -> RunResult:
    """Execute one full optimization run.

    The best-so-far value tracks every evaluated point (wasps and pool
    members alike) and the trace records it once per completed generation,
    so the trace is non-increasing by construction. A ``max_iterations`` of
    zero degenerates to evaluating a single wasp population, which keeps
    zero-budget harness invocations well formed.
    """
    rng = RandomStream(seed)
    ctx = EvalContext(rng=rng)
    gb = problem.bounds

    eta = neighborhood_width(1, params)
    trees = spawn_trees(rng, problem, params, eta)

    best_fitness = math.inf
    best_position = trees[0].position.copy()
    trace: list[float] = []
    stagnant = 0
    iterations_run = 0

    def score_wasps(wasps: list[Wasp]):
        nonlocal best_fitness, best_position
        for w in wasps:
            if w.fitness < best_fitness:
                best_fitness = w.fitness
                best_position = np.array(w.position, copy=True)

    if params.max_iterations == 0:
        for tree in trees:
            for fig in spawn_figs(rng, tree, params, eta, gb):
                fig.wasps = spawn_wasps(rng, problem, fig, params, ctx)
                score_wasps(fig.wasps)
        return RunResult(
            best_position=best_position,
            best_fitness=best_fitness,
            trace=np.array([best_fitness]),
            evaluations=ctx.evaluations,
            seed=seed,
            iterations_run=0,
        )

    for k in range(1, params.max_iterations + 1):
        offspring_blocks = []
        for tree in trees:
            figs = spawn_figs(rng, tree, params, eta, gb)
            tree_offspring = []
            for fig in figs:
                fig.wasps = spawn_wasps(rng, problem, fig, params, ctx)
                score_wasps(fig.wasps)
                grid = build_mating_grid([w for w in fig.wasps if w.sex == "female"])
                tree_offspring.append(mate(grid, [w for w in fig.wasps if w.sex == "male"]))
            offspring_blocks.extend(tree_offspring)

        pool = pool_offsprings(offspring_blocks)
        pool = search_directions(rng, pool, gb)
        pool = wind_effect(rng, pool, params, gb)

        eta = neighborhood_width(k + 1, params)
        trees, pool_fitness = select_trees(problem, pool, params.num_trees, eta, ctx)
        gen_best = float(pool_fitness.min())
        if gen_best < best_fitness:
            best_fitness = gen_best
            best_position = pool.positions[int(np.argmin(pool_fitness))].copy()

        improved = not trace or best_fitness < trace[-1]
        trace.append(best_fitness)
        iterations_run = k
        if on_generation is not None:
            on_generation(GenerationSnapshot(k, trees, pool, best_fitness))

        stagnant = 0 if improved else stagnant + 1
        if params.stagnation_window is not None and stagnant >= params.stagnation_window:
            break

    return RunResult(
        best_position=best_position,
        best_fitness=best_fitness,
        trace=np.array(trace),
        evaluations=ctx.evaluations,
        seed=seed,
        iterations_run=iterations_run,
    )
