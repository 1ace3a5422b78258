#!/usr/bin/env python3
"""End-to-end statistics demo: compare two optimizer configurations.

Runs the same problem set under two wind-threshold settings and feeds the
two summary files through the Friedman + Wilcoxon pipeline, producing
friedman.csv and wilcoxon.csv next to them.

    python scripts/compare_configs.py --runs 10 --out results/compare
"""

import argparse
from pathlib import Path

from figwasp.cli import main as cli_main

PROBLEMS = "F1@30, F9@30, F10@30, F11@30, F16, F18, F21"


def campaign(out: Path, name: str, wind_threshold: float, runs: int, seed: int) -> Path:
    directory = out / name
    cfg = directory / "campaign.cfg"
    directory.mkdir(parents=True, exist_ok=True)
    cfg.write_text(
        "schema = 1\n"
        f"problems = {PROBLEMS}\n"
        f"runs = {runs}\n"
        f"seed = {seed}\n"
        "iterations = 200\n"
        f"wind_threshold = {wind_threshold}\n"
        f"out = {directory}\n"
    )
    code = cli_main(["run", "--config", str(cfg)])
    if code != 0:
        raise SystemExit(code)
    return directory / "summary.csv"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="results/compare")
    args = parser.parse_args()

    out = Path(args.out)
    windy = campaign(out, "windy", 0.5, args.runs, args.seed)
    calm = campaign(out, "calm", 0.0, args.runs, args.seed)
    code = cli_main(["stats", f"windy={windy}", f"calm={calm}", "--out", str(out), "--baseline", "windy"])
    raise SystemExit(code)


if __name__ == "__main__":
    main()
