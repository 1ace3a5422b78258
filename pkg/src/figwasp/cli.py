"""Batch experiment harness: campaigns, trace/summary files, statistics.

Subcommands:

* ``run``          -- solve benchmark/engineering problems over many seeded
                      runs, writing ``summary.csv`` (best/worst/mean/std per
                      problem) and optional per-run trace files.
* ``engineering``  -- solve one constrained design problem and report the
                      best design found (variables, objective, violation).
* ``stats``        -- Friedman and pairwise Wilcoxon comparison tables from
                      two or more result files.
* ``list``         -- enumerate the available problem ids.

Per-run seeds are hashed from (master seed, problem id, dimension, run
index), so campaigns are reproducible and extending a campaign never
shifts existing seeds. Worker count comes from the FIGWASP_WORKERS
environment variable; serial and parallel execution produce identical
files.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import benchmarks
from .constrained import DEFAULT_PENALTY_COEFFICIENT, ENGINEERING_PROBLEMS, repair_discrete, to_objective
from .core import ObjectiveProblem, derive_seed
from .engine import FwscParams, RunResult, run
from .stats import PairedSamples, ResultMatrix, friedman_mean_ranks, friedman_statistic, wilcoxon_signed_rank

SCHEMA_VERSION = 1
WORKERS_ENV = "FIGWASP_WORKERS"
FEASIBLE_TOL = 1e-9
SIGNIFICANCE = 0.05

_FLOAT_FMT = "{:.6E}"


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


@dataclass
class ExperimentConfig:
    """One campaign: problems, run count, seeding, parameters, output."""

    problems: list[tuple[str, int]]
    runs: int = 30
    master_seed: int = 42
    out_dir: str = "results"
    trace: bool = False
    # "relative" scales eta0 by the mean half-width of the problem box, so
    # one neighborhood constant serves domains from [-5.12, 5.12] to
    # [-600, 600]; "absolute" uses eta0 in problem units as given.
    eta_units: str = "relative"
    params: FwscParams = field(default_factory=FwscParams)
    penalty_coefficient: float = DEFAULT_PENALTY_COEFFICIENT

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.eta_units not in ("relative", "absolute"):
            raise ConfigError("eta_units must be 'relative' or 'absolute'")
        if self.penalty_coefficient <= 0:
            raise ConfigError("penalty_coefficient must be positive")
        if not self.problems:
            raise ConfigError("problems: at least one problem id is required")
        for pid, dim in self.problems:
            resolve_problem(pid, dim, self.penalty_coefficient)


def known_problem_ids() -> list[str]:
    return list(benchmarks.BENCHMARK_IDS) + list(ENGINEERING_PROBLEMS)


def resolve_dimension(pid: str, dim: int | None) -> int:
    """Fill in the dimension for fixed-dimension problems; validate others."""
    if pid in ENGINEERING_PROBLEMS:
        implied = ENGINEERING_PROBLEMS[pid]().dimension
        if dim is not None and dim != implied:
            raise ConfigError(f"problems: {pid} has fixed dimension {implied}, not {dim}")
        return implied
    if pid in benchmarks.SPECS:
        allowed = benchmarks.SPECS[pid].dimensions
        if dim is None:
            if len(allowed) == 1:
                return allowed[0]
            raise ConfigError(f"dim: {pid} needs an explicit dimension from {sorted(allowed)}")
        if dim not in allowed:
            raise ConfigError(f"dim: {pid} allows dimensions {sorted(allowed)}, not {dim}")
        return dim
    raise ConfigError(f"problems: unknown problem id {pid!r} (see `figwasp list`)")


def resolve_problem(pid: str, dim: int, penalty_coefficient: float) -> ObjectiveProblem:
    dim = resolve_dimension(pid, dim)
    if pid in ENGINEERING_PROBLEMS:
        return to_objective(ENGINEERING_PROBLEMS[pid](), penalty_coefficient)
    return benchmarks.make_benchmark(pid, dim)


def resolved_params(config: ExperimentConfig, problem: ObjectiveProblem) -> FwscParams:
    """Per-problem parameters with eta0 translated to problem units."""
    if config.eta_units == "absolute":
        return config.params
    half_width = float(np.mean((problem.bounds.upper - problem.bounds.lower) / 2.0))
    return replace(config.params, eta0=config.params.eta0 * half_width)


def _one_run(task) -> tuple[str, int, int, int, RunResult]:
    pid, dim, run_index, seed, params, penalty = task
    problem = resolve_problem(pid, dim, penalty)
    return pid, dim, run_index, seed, run(problem, params, seed)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)


def execute_campaign(config: ExperimentConfig) -> dict[tuple[str, int], list[tuple[int, int, RunResult]]]:
    """Run every (problem, run index) task; ordered, seeded, optionally parallel."""
    tasks = []
    for pid, dim in config.problems:
        problem = resolve_problem(pid, dim, config.penalty_coefficient)
        params = resolved_params(config, problem)
        for run_index in range(config.runs):
            seed = derive_seed(config.master_seed, pid, dim, run_index)
            tasks.append((pid, dim, run_index, seed, params, config.penalty_coefficient))
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_one_run, tasks))
    else:
        outcomes = [_one_run(t) for t in tasks]
    grouped: dict[tuple[str, int], list[tuple[int, int, RunResult]]] = {}
    for pid, dim, run_index, seed, result in outcomes:
        grouped.setdefault((pid, dim), []).append((run_index, seed, result))
    for runs in grouped.values():
        runs.sort(key=lambda item: item[0])
    return grouped


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    """Write-then-rename so a crash never leaves a partial file behind."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\r\n")
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value: float) -> str:
    return _FLOAT_FMT.format(float(value))


def write_summary(out_dir: Path, grouped) -> Path:
    rows = []
    for (pid, dim), runs in grouped.items():
        bests = np.array([result.best_fitness for _, _, result in runs])
        rows.append(
            [pid, str(dim), _fmt(bests.min()), _fmt(bests.max()), _fmt(bests.mean()), _fmt(bests.std())]
        )
    path = out_dir / "summary.csv"
    _write_csv(path, ["problem", "dimension", "best", "worst", "mean", "std"], rows)
    return path


def write_traces(out_dir: Path, grouped) -> list[Path]:
    paths = []
    for (pid, _dim), runs in grouped.items():
        for _run_index, seed, result in runs:
            rows = [[str(i + 1), _fmt(v)] for i, v in enumerate(result.trace)]
            path = out_dir / f"trace_{pid}_{seed}.csv"
            _write_csv(path, ["iteration", "best_so_far"], rows)
            paths.append(path)
    return paths


def cmd_run(config: ExperimentConfig) -> int:
    grouped = execute_campaign(config)
    out_dir = Path(config.out_dir)
    summary = write_summary(out_dir, grouped)
    if config.trace:
        write_traces(out_dir, grouped)
    print(f"wrote {summary}")
    return 0


def cmd_engineering(pid: str, config: ExperimentConfig) -> int:
    if pid not in ENGINEERING_PROBLEMS:
        print(f"unknown engineering problem {pid!r}; choose from {sorted(ENGINEERING_PROBLEMS)}", file=sys.stderr)
        return 2
    design = ENGINEERING_PROBLEMS[pid]()
    grouped = execute_campaign(config)
    runs = grouped[(pid, design.dimension)]

    candidates = []
    for _run_index, seed, result in runs:
        position = repair_discrete(result.best_position, design.variable_kinds)
        violation = design.max_violation(position)
        objective = design.objective(position)
        candidates.append((violation > FEASIBLE_TOL, objective, seed, position, violation))
    # feasible designs first, then by raw objective
    infeasible, objective, seed, position, violation = min(candidates, key=lambda c: (c[0], c[1]))

    print(f"{pid}: best of {config.runs} run(s), master seed {config.master_seed}")
    for name, value in zip(design.variable_names, position):
        print(f"  {name} = {value:.6g}")
    print(f"  objective = {objective:.4f}")
    print(f"  max constraint violation = {violation:.6E}")
    print(f"  feasible = {'yes' if not infeasible else 'no'}")

    header = list(design.variable_names) + ["objective", "max_violation", "seed"]
    row = [_fmt(v) for v in position] + [_fmt(objective), _fmt(violation), str(seed)]
    path = Path(config.out_dir) / f"engineering_{pid}.csv"
    _write_csv(path, header, [row])
    print(f"wrote {path}")
    return 0


def _read_result_file(path: Path) -> tuple[list[tuple[str, str]], dict[tuple[str, str], float]]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"problem", "dimension", "mean"} <= set(reader.fieldnames):
            raise ConfigError(f"{path}: expected columns problem, dimension, mean")
        keys, values = [], {}
        for row in reader:
            key = (row["problem"], row["dimension"])
            keys.append(key)
            values[key] = float(row["mean"])
    if len(keys) != len(set(keys)):
        raise ConfigError(f"{path}: duplicate problem rows")
    return keys, values


def cmd_stats(inputs: list[str], out_dir: str, baseline: str | None) -> int:
    algorithms = []
    for item in inputs:
        if "=" in item:
            name, path = item.split("=", 1)
        else:
            path = item
            name = Path(path).stem
        algorithms.append((name, Path(path)))
    names = [name for name, _ in algorithms]
    if len(set(names)) != len(names):
        print("stats: algorithm names must be unique (use name=path)", file=sys.stderr)
        return 2
    if len(names) < 2:
        print("stats: need at least two result files", file=sys.stderr)
        return 2
    if baseline is None:
        baseline = names[0]
    if baseline not in names:
        print(f"stats: baseline {baseline!r} is not among {names}", file=sys.stderr)
        return 2

    loaded = {}
    key_order = None
    for name, path in algorithms:
        keys, values = _read_result_file(path)
        if key_order is None:
            key_order = keys
        elif set(keys) != set(key_order):
            missing = sorted(set(key_order) - set(keys))
            extra = sorted(set(keys) - set(key_order))
            print(
                f"stats: {name} rows do not match {names[0]}:"
                f" missing {missing or 'none'}, extra {extra or 'none'}",
                file=sys.stderr,
            )
            return 1
        loaded[name] = values

    matrix = ResultMatrix(
        problems=tuple(f"{pid}@{dim}" for pid, dim in key_order),
        algorithms=tuple(names),
        values=np.array([[loaded[name][key] for name in names] for key in key_order]),
    )
    mean_ranks, ordinals = friedman_mean_ranks(matrix)
    statistic, p_value = friedman_statistic(matrix)

    out = Path(out_dir)
    _write_csv(
        out / "friedman.csv",
        ["metric"] + names,
        [
            ["mean_rank"] + [_fmt(v) for v in mean_ranks],
            ["ranking"] + [str(int(v)) for v in ordinals],
        ],
    )

    base_values = np.array([loaded[baseline][key] for key in key_order])
    wilcoxon_rows = []
    for name in names:
        if name == baseline:
            continue
        other = np.array([loaded[name][key] for key in key_order])
        label = f"{name} vs {baseline}"
        try:
            res = wilcoxon_signed_rank(PairedSamples(other, base_values))
        except ValueError:
            wilcoxon_rows.append([label, "", "", "", "no information"])
            continue
        # T+ collects ranks where the other algorithm's value is higher,
        # i.e. worse under minimization, so T+ > T- favors the baseline.
        if res.t_plus > res.t_minus:
            winner = baseline
        elif res.t_minus > res.t_plus:
            winner = name
        else:
            winner = "tie"
        if res.p_value > SIGNIFICANCE:
            winner += " (not significant)"
        wilcoxon_rows.append([label, _fmt(res.p_value), _fmt(res.t_plus), _fmt(res.t_minus), winner])
    _write_csv(out / "wilcoxon.csv", ["comparison", "p_value", "t_plus", "t_minus", "winner"], wilcoxon_rows)

    print(f"friedman chi-square = {statistic:.6g}, p = {p_value:.6g}")
    print(f"wrote {out / 'friedman.csv'} and {out / 'wilcoxon.csv'}")
    return 0


def cmd_list() -> int:
    for fid in benchmarks.BENCHMARK_IDS:
        spec = benchmarks.SPECS[fid]
        dims = ",".join(str(d) for d in spec.dimensions)
        print(f"{fid:4s} {spec.name:18s} dims={dims:18s} range=[{spec.low:g},{spec.high:g}]")
    for pid in ENGINEERING_PROBLEMS:
        problem = ENGINEERING_PROBLEMS[pid]()
        print(f"{pid:15s} dim={problem.dimension} constrained")
    return 0


_CONFIG_KEYS = {
    "schema",
    "problems",
    "runs",
    "seed",
    "out",
    "trace",
    "eta_units",
    "eta0",
    "trees",
    "figs_per_tree",
    "wasps_per_fig",
    "wind_threshold",
    "wind_fraction",
    "iterations",
    "decay_scale",
    "stagnation_window",
    "penalty_coefficient",
}


def parse_config_file(path: str | Path) -> dict:
    """Parse the key=value campaign format (schema 1, '#' comments)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    if "schema" in values and int(values["schema"]) != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported schema {values['schema']} (expected {SCHEMA_VERSION})")
    return values


def parse_problem_token(token: str, default_dim: int | None) -> tuple[str, int]:
    if "@" in token:
        pid, _, dim_text = token.partition("@")
        try:
            dim = int(dim_text)
        except ValueError as exc:
            raise ConfigError(f"problems: bad dimension in {token!r}") from exc
    else:
        pid, dim = token, default_dim
    return pid, resolve_dimension(pid, dim)


def _config_from_args(args: argparse.Namespace, problem_tokens: list[str]) -> ExperimentConfig:
    file_values = parse_config_file(args.config) if args.config else {}

    def pick(cli_value, key, cast, fallback):
        if cli_value is not None:
            return cli_value
        if key in file_values and file_values[key] != "":
            return cast(file_values[key])
        return fallback

    tokens = problem_tokens or (
        [t.strip() for t in file_values.get("problems", "").split(",") if t.strip()]
    )
    default_dim = pick(args.dim, "", int, None)

    def as_bool(text: str) -> bool:
        return text.lower() in ("1", "true", "yes", "on")

    def opt_int(text: str) -> int | None:
        return int(text) if text else None

    def opt_float(text: str) -> float | None:
        return float(text) if text else None

    params = FwscParams(
        eta0=pick(None, "eta0", float, 0.8),
        num_trees=pick(None, "trees", int, 3),
        figs_per_tree=pick(None, "figs_per_tree", int, 4),
        wasps_per_fig=pick(None, "wasps_per_fig", int, 8),
        wind_threshold=pick(None, "wind_threshold", float, 0.5),
        wind_fraction=pick(None, "wind_fraction", float, 0.10),
        max_iterations=pick(None, "iterations", int, 500),
        decay_scale=pick(None, "decay_scale", opt_float, None),
        stagnation_window=pick(None, "stagnation_window", opt_int, None),
    )
    return ExperimentConfig(
        problems=[parse_problem_token(t, default_dim) for t in tokens],
        runs=pick(args.runs, "runs", int, 30),
        master_seed=pick(args.seed, "seed", int, 42),
        out_dir=pick(args.out, "out", str, "results"),
        trace=bool(args.trace) or pick(None, "trace", as_bool, False),
        eta_units=pick(None, "eta_units", str, "relative"),
        params=params,
        penalty_coefficient=pick(None, "penalty_coefficient", float, DEFAULT_PENALTY_COEFFICIENT),
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="campaign config file (key = value, schema 1)")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--runs", type=int, default=None, help="runs per problem")
    parser.add_argument("--dim", type=int, default=None, help="dimension for scalable benchmarks")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--trace", action="store_true", help="write per-run trace files")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="figwasp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a benchmark campaign")
    p_run.add_argument("problems", nargs="*", help="problem ids, e.g. F1@30 or F16")
    _add_common_flags(p_run)

    p_eng = sub.add_parser("engineering", help="solve a constrained design problem")
    p_eng.add_argument("problem", help="pressure-vessel | stepped-beam | welded-beam")
    _add_common_flags(p_eng)

    p_stats = sub.add_parser("stats", help="compare result files")
    p_stats.add_argument("inputs", nargs="+", help="result files, optionally name=path")
    p_stats.add_argument("--out", default="results", help="output directory")
    p_stats.add_argument("--baseline", default=None, help="baseline algorithm name")

    sub.add_parser("list", help="list available problem ids")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(_config_from_args(args, list(args.problems)))
        if args.command == "engineering":
            config = _config_from_args(args, [args.problem])
            return cmd_engineering(args.problem, config)
        if args.command == "stats":
            return cmd_stats(args.inputs, args.out, args.baseline)
        if args.command == "list":
            return cmd_list()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
