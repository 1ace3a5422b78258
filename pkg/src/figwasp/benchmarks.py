"""The F1-F23 benchmark suite with table-exact ranges and reference optima.

Function ids, dimensions, ranges, and reported minima follow the published
benchmark tables verbatim, including their quirks (Quartic on [-128, 128],
Branin on [-5, 5]^2, Hartman 3 on [1, 3]^3). Closed-form expressions are
the standard literature ones. `optimum_witness` records a minimizer only
where the tabulated minimum is achieved exactly (to 1e-9) inside the
tabulated range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Bounds, ObjectiveProblem, RandomStream, Vector

UNIMODAL_SEPARABLE = "unimodal-separable"
UNIMODAL_NONSEPARABLE = "unimodal-nonseparable"
MULTIMODAL_SEPARABLE = "multimodal-separable"
MULTIMODAL_NONSEPARABLE = "multimodal-nonseparable"
FIXED_DIMENSION = "fixed-dimension"

SCALABLE_DIMENSIONS = (30, 100, 500, 1000)


def sphere(x):
    return float(np.sum(x * x))


def schwefel_222(x):
    ax = np.abs(x)
    with np.errstate(over="ignore"):
        # the |x_i| product overflows to +inf near the corners above ~300 dims
        return float(np.sum(ax) + np.prod(ax))


def schwefel_12(x):
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_221(x):
    return float(np.max(np.abs(x)))


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def step(x):
    return float(np.sum(np.floor(x + 0.5) ** 2))


def quartic(x):
    i = np.arange(1, x.shape[0] + 1)
    return float(np.sum(i * x**4))


def schwefel(x):
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def rastrigin(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def ackley(x):
    n = x.shape[0]
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / n))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
        + 20.0
        + np.e
    )


def griewank(x):
    i = np.arange(1, x.shape[0] + 1)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _u_penalty(x, a, k, m):
    out = np.zeros_like(x)
    over = x > a
    under = x < -a
    out[over] = k * (x[over] - a) ** m
    out[under] = k * (-x[under] - a) ** m
    return np.sum(out)


def penalized(x):
    n = x.shape[0]
    y = 1.0 + (x + 1.0) / 4.0
    core = (
        10.0 * np.sin(np.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(np.pi / n * core + _u_penalty(x, 10.0, 100.0, 4))


def penalized2(x):
    core = (
        np.sin(3.0 * np.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2)
    )
    return float(0.1 * core + _u_penalty(x, 5.0, 100.0, 4))


_FOXHOLES_A = np.array(
    [
        np.tile([-32.0, -16.0, 0.0, 16.0, 32.0], 5),
        np.repeat([-32.0, -16.0, 0.0, 16.0, 32.0], 5),
    ]
)


def foxholes(x):
    j = np.arange(1, 26)
    denom = j + np.sum((x[:, None] - _FOXHOLES_A) ** 6, axis=0)
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / denom)))


_KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
_KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def kowalik(x):
    num = x[0] * (_KOWALIK_B**2 + _KOWALIK_B * x[1])
    den = _KOWALIK_B**2 + _KOWALIK_B * x[2] + x[3]
    return float(np.sum((_KOWALIK_A - num / den) ** 2))


def six_hump_camel(x):
    x1, x2 = x
    return float(
        4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4
    )


def branin(x):
    x1, x2 = x
    a, b, c = 1.0, 5.1 / (4.0 * np.pi**2), 5.0 / np.pi
    return float(
        a * (x2 - b * x1**2 + c * x1 - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1)
        + 10.0
    )


def goldstein_price(x):
    x1, x2 = x
    t1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    t2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return float(t1 * t2)


_HARTMAN3_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMAN3_A = np.array([[3, 10, 30], [0.1, 10, 35], [3, 10, 30], [0.1, 10, 35]], dtype=float)
_HARTMAN3_P = np.array(
    [
        [0.3689, 0.1170, 0.2673],
        [0.4699, 0.4387, 0.7470],
        [0.1091, 0.8732, 0.5547],
        [0.0381, 0.5743, 0.8828],
    ]
)


def hartman3(x):
    inner = np.sum(_HARTMAN3_A * (x - _HARTMAN3_P) ** 2, axis=1)
    return float(-np.sum(_HARTMAN3_ALPHA * np.exp(-inner)))


_HARTMAN6_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMAN6_A = np.array(
    [
        [10, 3, 17, 3.5, 1.7, 8],
        [0.05, 10, 17, 0.1, 8, 14],
        [3, 3.5, 1.7, 10, 17, 8],
        [17, 8, 0.05, 10, 0.1, 14],
    ],
    dtype=float,
)
_HARTMAN6_P = np.array(
    [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ]
)


def hartman6(x):
    inner = np.sum(_HARTMAN6_A * (x - _HARTMAN6_P) ** 2, axis=1)
    return float(-np.sum(_HARTMAN6_ALPHA * np.exp(-inner)))


_SHEKEL_A = np.array(
    [
        [4, 4, 4, 4],
        [1, 1, 1, 1],
        [8, 8, 8, 8],
        [6, 6, 6, 6],
        [3, 7, 3, 7],
        [2, 9, 2, 9],
        [5, 5, 3, 3],
        [8, 1, 8, 1],
        [6, 2, 6, 2],
        [7, 3.6, 7, 3.6],
    ],
    dtype=float,
)
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def _shekel(x, m):
    diff = x - _SHEKEL_A[:m]
    return float(-np.sum(1.0 / (np.sum(diff * diff, axis=1) + _SHEKEL_C[:m])))


def shekel5(x):
    return _shekel(x, 5)


def shekel7(x):
    return _shekel(x, 7)


def shekel10(x):
    return _shekel(x, 10)


def _origin(n: int) -> Vector:
    return np.zeros(n)


def _ones(n: int) -> Vector:
    return np.ones(n)


def _minus_ones(n: int) -> Vector:
    return -np.ones(n)


@dataclass(frozen=True)
class BenchmarkSpec:
    fid: str
    name: str
    category: str
    dimensions: tuple[int, ...]
    low: float
    high: float
    f_min: float
    objective: Callable[[Vector], float]
    f_min_times_n: bool = False
    witness: Callable[[int], Vector] | None = None
    noisy: bool = False


_SPEC_LIST = [
    BenchmarkSpec("F1", "Sphere", UNIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -100, 100, 0.0, sphere, witness=_origin),
    BenchmarkSpec("F2", "Schwefel 2.22", UNIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -10, 10, 0.0, schwefel_222, witness=_origin),
    BenchmarkSpec("F3", "Schwefel 1.2", UNIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -100, 100, 0.0, schwefel_12, witness=_origin),
    BenchmarkSpec("F4", "Schwefel 2.21", UNIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -100, 100, 0.0, schwefel_221, witness=_origin),
    BenchmarkSpec("F5", "Rosenbrock", UNIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -30, 30, 0.0, rosenbrock, witness=_ones),
    BenchmarkSpec("F6", "Step", UNIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -100, 100, 0.0, step, witness=_origin),
    BenchmarkSpec("F7", "Quartic", UNIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -128, 128, 0.0, quartic, witness=_origin, noisy=True),
    BenchmarkSpec("F8", "Schwefel", MULTIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -500, 500, -418.9829, schwefel, f_min_times_n=True),
    BenchmarkSpec("F9", "Rastrigin", MULTIMODAL_SEPARABLE, SCALABLE_DIMENSIONS, -5.12, 5.12, 0.0, rastrigin, witness=_origin),
    BenchmarkSpec("F10", "Ackley", MULTIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -32, 32, 0.0, ackley, witness=_origin),
    BenchmarkSpec("F11", "Griewank", MULTIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -600, 600, 0.0, griewank, witness=_origin),
    BenchmarkSpec("F12", "Penalized", MULTIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -50, 50, 0.0, penalized, witness=_minus_ones),
    BenchmarkSpec("F13", "Penalized2", MULTIMODAL_NONSEPARABLE, SCALABLE_DIMENSIONS, -50, 50, 0.0, penalized2, witness=_ones),
    BenchmarkSpec("F14", "Foxholes", FIXED_DIMENSION, (2,), -65, 65, 1.0, foxholes),
    BenchmarkSpec("F15", "Kowalik", FIXED_DIMENSION, (4,), -5, 5, 0.0003, kowalik),
    BenchmarkSpec("F16", "Six Hump Camel", FIXED_DIMENSION, (2,), -5, 5, -1.0316, six_hump_camel),
    BenchmarkSpec("F17", "Branin", FIXED_DIMENSION, (2,), -5, 5, 0.398, branin),
    BenchmarkSpec("F18", "Goldstein-Price", FIXED_DIMENSION, (2,), -2, 2, 3.0, goldstein_price, witness=lambda n: np.array([0.0, -1.0])),
    BenchmarkSpec("F19", "Hartman 3", FIXED_DIMENSION, (3,), 1, 3, -3.86, hartman3),
    BenchmarkSpec("F20", "Hartman 6", FIXED_DIMENSION, (6,), 0, 1, -3.32, hartman6),
    BenchmarkSpec("F21", "Shekel 5", FIXED_DIMENSION, (4,), 0, 10, -10.1532, shekel5),
    BenchmarkSpec("F22", "Shekel 7", FIXED_DIMENSION, (4,), 0, 10, -10.4028, shekel7),
    BenchmarkSpec("F23", "Shekel 10", FIXED_DIMENSION, (4,), 0, 10, -10.5363, shekel10),
]

SPECS: dict[str, BenchmarkSpec] = {s.fid: s for s in _SPEC_LIST}

BENCHMARK_IDS = tuple(SPECS)


def _check_dimension(spec: BenchmarkSpec, dimension: int) -> None:
    if dimension not in spec.dimensions:
        raise ValueError(
            f"{spec.fid} ({spec.name}) is defined for dimensions {sorted(spec.dimensions)},"
            f" not {dimension}"
        )


def _noise_term(rng: RandomStream) -> float:
    return float(rng.uniform())


def make_benchmark(fid: str, dimension: int, include_noise: bool = True) -> ObjectiveProblem:
    """Instantiate a benchmark at one of its tabulated dimensions.

    ``include_noise=False`` turns off the Quartic function's additive
    uniform noise so witness points can be checked exactly.
    """
    if fid not in SPECS:
        raise ValueError(f"unknown benchmark id {fid!r}; known ids are F1..F23")
    spec = SPECS[fid]
    _check_dimension(spec, dimension)
    noise = _noise_term if (spec.noisy and include_noise) else None
    return ObjectiveProblem(
        name=f"{spec.fid} {spec.name}",
        dimension=dimension,
        bounds=Bounds.box(spec.low, spec.high, dimension),
        objective=spec.objective,
        noise=noise,
    )


def known_optimum(fid: str, dimension: int) -> float:
    """The tabulated minimum, scaled by n where the table says so."""
    spec = SPECS[fid]
    _check_dimension(spec, dimension)
    return spec.f_min * dimension if spec.f_min_times_n else spec.f_min


def optimum_witness(fid: str, dimension: int) -> Vector | None:
    """A point achieving the tabulated minimum exactly, when one exists."""
    spec = SPECS[fid]
    _check_dimension(spec, dimension)
    if spec.witness is None:
        return None
    return spec.witness(dimension)
