"""Command line front end: ``orbitlab {analyze,stratify,verify,classify}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import OrbitlabError
from .moment import LinearTorusAction
from .orbitspace import (
    assemble_orbit_space,
    classify_action,
    grassmannian_orbit_space,
    holes_from_degree_function,
)
from .polytope import cross_polytope, convex_hull, polytope_to_json, rational_from_json, stellar_subdivision
from .quadric import MAX_N, MIN_N, QuadricModel
from .quotient import model_stratification
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    weights: str | None = None
    degrees: str | None = None
    samples: int = 1000
    tol: float = 1e-7
    seed: int | None = None
    out: str | None = None
    workers: int = 1


class UsageError(Exception):
    pass


def load_weights(path: str) -> tuple[tuple[int, ...], ...]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read weights from {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("weights")
    if not isinstance(data, list) or not data:
        raise UsageError("weights file must hold a nonempty list of integer vectors")
    out = []
    for w in data:
        w = [w] if isinstance(w, int) else w
        if not isinstance(w, list) or not w or not all(isinstance(x, int) and not isinstance(x, bool) for x in w):
            raise UsageError(f"malformed weight {w!r}")
        out.append(tuple(w))
    if len({len(w) for w in out}) != 1:
        raise UsageError("weights have different lengths")
    return tuple(out)


def load_degrees(path: str):
    """``{"vertices": [...], "degrees": [{"facet": [i, ...], "degree": d}, ...]}``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
        verts = [tuple(rational_from_json(c) for c in v) for v in data["vertices"]]
        entries = [(e["facet"], rational_from_json(e["degree"])) for e in data["degrees"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read degree data from {path}: {exc}") from exc
    poly = convex_hull(verts)
    degrees = {}
    for facet, deg in entries:
        idx = frozenset(poly.vertices.index(verts[i]) for i in facet)
        degrees[idx] = Fraction(deg)
    return poly, degrees


def _check_n(n):
    if n is None:
        raise UsageError("--n is required")
    if not MIN_N <= n <= MAX_N:
        raise UsageError(f"--n must lie in [{MIN_N}, {MAX_N}]")


def cmd_analyze(cfg: RunConfig) -> tuple[dict, int]:
    _check_n(cfg.n)
    model = QuadricModel(cfg.n)
    strat = model_stratification(model)
    verdict = grassmannian_orbit_space(cfg.n)
    assembled = assemble_orbit_space(strat)
    sub = strat.subdivision
    by_dim: dict[str, int] = {}
    for c in sub.cells:
        by_dim[str(c.dim)] = by_dim.get(str(c.dim), 0) + 1
    out = {
        "n": cfg.n,
        "polytope": polytope_to_json(cross_polytope(model.k), faces=False),
        "stratification": {
            "cells": len(sub.cells),
            "maximal_cells": len(sub.maximal_cells()),
            "cells_by_dim": by_dim,
            "stellar": sub == stellar_subdivision(cross_polytope(model.k), (0,) * model.k),
        },
        "orbit_space": verdict.to_json(),
        "verdict": str(verdict),
        "assembled_from_stratification": assembled.to_json(),
        "consistent": assembled == verdict,
    }
    return out, EXIT_OK


def cmd_stratify(cfg: RunConfig) -> tuple[dict, int]:
    if (cfg.n is None) == (cfg.weights is None):
        raise UsageError("give exactly one of --n or --weights")
    if cfg.weights is not None:
        model = LinearTorusAction(load_weights(cfg.weights))
    else:
        _check_n(cfg.n)
        model = QuadricModel(cfg.n)
    return model_stratification(model).to_json(), EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    _check_n(cfg.n)
    if cfg.seed is None:
        raise UsageError("--seed is required for sampling")
    if cfg.samples < 1:
        raise UsageError("--samples must be positive")
    report = run_verification(cfg.n, cfg.samples, cfg.tol, cfg.seed, workers=cfg.workers)
    return report.to_json(), EXIT_OK if report.ok else EXIT_FAIL


def cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    if (cfg.weights is None) == (cfg.degrees is None):
        raise UsageError("give exactly one of --weights or --degrees")
    if cfg.weights is not None:
        verdict = classify_action(LinearTorusAction(load_weights(cfg.weights)))
    else:
        poly, degrees = load_degrees(cfg.degrees)
        verdict = holes_from_degree_function(poly, degrees)
    return {**verdict.to_json(), "verdict": str(verdict)}, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "stratify": cmd_stratify,
    "verify": cmd_verify,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitlab", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--out", help="write JSON here instead of stdout")
        if name in ("analyze", "stratify", "verify"):
            p.add_argument("--n", type=int)
        if name in ("stratify", "classify"):
            p.add_argument("--weights", help="JSON list of integer weight vectors")
        if name == "classify":
            p.add_argument("--degrees", help="JSON polytope with facet degrees")
        if name == "verify":
            p.add_argument("--samples", type=int, default=1000)
            p.add_argument("--tol", type=float, default=1e-7)
            p.add_argument("--seed", type=int)
            p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ORBITLAB_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "seed"})
    try:
        out, code = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, OrbitlabError) as exc:
        print(f"orbitlab {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(out, indent=2)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
