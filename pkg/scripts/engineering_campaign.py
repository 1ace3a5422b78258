#!/usr/bin/env python3
"""Solve the three constrained design problems and print their reports.

    python scripts/engineering_campaign.py --runs 30 --seed 42 --out results/designs
"""

import argparse

from figwasp.cli import main as cli_main
from figwasp.constrained import ENGINEERING_PROBLEMS


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=30)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="results/designs")
    args = parser.parse_args()

    for pid in ENGINEERING_PROBLEMS:
        code = cli_main(
            [
                "engineering",
                pid,
                "--runs",
                str(args.runs),
                "--seed",
                str(args.seed),
                "--out",
                args.out,
            ]
        )
        if code != 0:
            raise SystemExit(code)
        print()


if __name__ == "__main__":
    main()
