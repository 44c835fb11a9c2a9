"""Run the sampling battery for several n and seeds and summarise the
worst residual per check. Exit status is 1 if any check fails."""

from __future__ import annotations

import argparse
import json
import sys

from orbitlab.verify import CHECKS, run_verification


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[4, 5, 6, 7])
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--tol", type=float, default=1e-7)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", help="JSON output path (default stdout)")
    args = parser.parse_args(argv)
    summary = []
    for n in args.n:
        for seed in args.seeds:
            report = run_verification(n, args.samples, args.tol, seed, workers=args.workers)
            summary.append(
                {
                    "n": n,
                    "seed": seed,
                    "ok": report.ok,
                    "checks": {
                        name: {
                            "passed": report.checks[name].passed,
                            "failed": report.checks[name].failed,
                            "max_residual": report.checks[name].max_residual,
                        }
                        for name in CHECKS
                    },
                    "seconds": round(report.wall_time, 3),
                }
            )
            print(f"n={n} seed={seed}: {'ok' if report.ok else 'FAILED'} ({report.wall_time:.2f}s)", file=sys.stderr)
    text = json.dumps(summary, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(s["ok"] for s in summary) else 1


if __name__ == "__main__":
    sys.exit(main())
