#!/usr/bin/env python3
"""Desk-scale benchmark campaign over the F1-F23 suite.

Runs every benchmark at one scalable dimension (fixed-dimension functions
at their own dimension), then prints the per-problem Best / Worst / Mean /
STD table and leaves summary + trace CSVs in the output directory.

    python scripts/benchmark_campaign.py --dim 30 --runs 30 --seed 42 --out results/f30
"""

import argparse
import csv
from pathlib import Path

from figwasp.benchmarks import BENCHMARK_IDS, SPECS
from figwasp.cli import main as cli_main


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=30, choices=[30, 100, 500, 1000])
    parser.add_argument("--runs", type=int, default=30)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--iterations", type=int, default=500)
    parser.add_argument("--out", default="results/benchmarks")
    parser.add_argument("--trace", action="store_true")
    return parser.parse_args()


def main():
    args = parse_args()
    tokens = []
    for fid in BENCHMARK_IDS:
        spec = SPECS[fid]
        dim = args.dim if len(spec.dimensions) > 1 else spec.dimensions[0]
        tokens.append(f"{fid}@{dim}")

    out = Path(args.out)
    cfg = out / "campaign.cfg"
    out.mkdir(parents=True, exist_ok=True)
    cfg.write_text(
        "schema = 1\n"
        f"problems = {', '.join(tokens)}\n"
        f"runs = {args.runs}\n"
        f"seed = {args.seed}\n"
        f"iterations = {args.iterations}\n"
        f"trace = {'true' if args.trace else 'false'}\n"
        f"out = {out}\n"
    )
    code = cli_main(["run", "--config", str(cfg)])
    if code != 0:
        raise SystemExit(code)

    with open(out / "summary.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    print(f"\n{'problem':8s} {'dim':>5s} {'best':>13s} {'worst':>13s} {'mean':>13s} {'std':>13s}")
    for row in rows:
        print(
            f"{row['problem']:8s} {row['dimension']:>5s} {row['best']:>13s}"
            f" {row['worst']:>13s} {row['mean']:>13s} {row['std']:>13s}"
        )


if __name__ == "__main__":
    main()
