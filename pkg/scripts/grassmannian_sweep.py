"""Stratify the quadric model for a range of n and compare the assembled
orbit space with the closed-form answer. Writes one JSON record per n."""

from __future__ import annotations

import argparse
import json
import sys
import time

from orbitlab.orbitspace import assemble_orbit_space, grassmannian_orbit_space
from orbitlab.polytope import cross_polytope, stellar_subdivision
from orbitlab.quadric import MAX_N, MIN_N, QuadricModel
from orbitlab.quotient import model_stratification


def sweep_one(n: int) -> dict:
    start = time.perf_counter()
    model = QuadricModel(n)
    strat = model_stratification(model)
    assembled = assemble_orbit_space(strat)
    elapsed = time.perf_counter() - start
    expected = grassmannian_orbit_space(n)
    sub = strat.subdivision
    return {
        "n": n,
        "cells": len(sub.cells),
        "maximal_cells": len(sub.maximal_cells()),
        "stellar": sub == stellar_subdivision(cross_polytope(model.k), (0,) * model.k),
        "verdict": str(expected),
        "assembled": str(assembled),
        "consistent": assembled == expected,
        "seconds": round(elapsed, 3),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-n", type=int, default=MIN_N)
    parser.add_argument("--max-n", type=int, default=9)
    parser.add_argument("--out", help="JSON output path (default stdout)")
    args = parser.parse_args(argv)
    if not MIN_N <= args.min_n <= args.max_n <= MAX_N:
        parser.error(f"need {MIN_N} <= min-n <= max-n <= {MAX_N}")
    records = []
    for n in range(args.min_n, args.max_n + 1):
        rec = sweep_one(n)
        records.append(rec)
        print(f"n={n}: {rec['cells']} cells, {rec['verdict']}, consistent={rec['consistent']} ({rec['seconds']}s)", file=sys.stderr)
    text = json.dumps(records, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r["consistent"] for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
