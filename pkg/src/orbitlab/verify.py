"""Monte Carlo certification of the quadric model.

Each check counts passing and failing samples; any failure fails the run.
Sample batches draw from independent streams spawned from one root seed, so
reports do not depend on how batches are scheduled.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .moment import moment_map
from .polytope import Subdivision, cross_polytope, stellar_subdivision
from .projective import ProjectivePoint
from .quadric import (
    QuadricModel,
    embed_coords,
    products,
    quadric_residuals,
    sample_oriented_planes,
)
from .quotient import (
    boundary_fiber_point,
    fiber_point,
    model_stratification,
    orbit_equivalence_record,
    q_map,
    rescale_to_fiber,
)

QUAD_TOL = 1e-10
BOUNDARY_TOL = 1e-12
BATCH_SIZE = 250

CHECKS = (
    "quadric_membership",
    "moment_in_polytope",
    "moment_torus_invariance",
    "boundary_characterization",
    "boundary_single_orbit",
    "interior_q_separation",
    "q_invariance",
    "stratification_exactness",
)


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    max_residual: float = 0.0
    failure: dict | None = None

    def record(self, ok: bool, residual: float = 0.0, sample=None) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.failure is None:
                self.failure = {"residual": residual, "sample": sample}
        if np.isfinite(residual):
            self.max_residual = max(self.max_residual, float(residual))

    def merge(self, other: "CheckResult") -> "CheckResult":
        return CheckResult(
            self.name,
            self.passed + other.passed,
            self.failed + other.failed,
            max(self.max_residual, other.max_residual),
            self.failure if self.failure is not None else other.failure,
        )

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "max_residual": self.max_residual,
            "failure": self.failure,
        }


@dataclass
class VerificationReport:
    n: int
    seed: int
    samples: int
    tol: float
    checks: dict[str, CheckResult] = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def to_json(self, include_time: bool = True) -> dict:
        out = {
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "tol": self.tol,
            "ok": self.ok,
            "checks": {k: v.to_json() for k, v in self.checks.items()},
            "details": self.details,
        }
        if include_time:
            out["wall_time"] = self.wall_time
        return out


def _point_json(z) -> list:
    return ProjectivePoint(z).to_json()


def random_boundary_moment(k: int, rng: np.random.Generator) -> np.ndarray:
    """A point on a random face of the boundary of the cross-polytope."""
    signs = rng.choice([-1.0, 1.0], size=k)
    w = rng.dirichlet(np.ones(k))
    if k > 1 and rng.random() < 0.25:  # land on a lower-dimensional face
        drop = rng.choice(k, size=rng.integers(1, k), replace=False)
        w[drop] = 0.0
        w /= w.sum()
    return signs * w


def random_interior_moment(k: int, rng: np.random.Generator) -> np.ndarray:
    signs = rng.choice([-1.0, 1.0], size=k)
    return signs * rng.dirichlet(np.ones(k + 1))[:k]


def random_quotient_point(model: QuadricModel, rng: np.random.Generator) -> np.ndarray:
    m = model.quotient_dim + 1
    return rng.standard_normal(m) + 1j * rng.standard_normal(m)


def _compact(k: int, rng) -> np.ndarray:
    return np.exp(1j * rng.uniform(0, 2 * np.pi, k))


def _battery(model: QuadricModel, count: int, seed_seq: np.random.SeedSequence, tol: float) -> dict[str, CheckResult]:
    rng = np.random.default_rng(seed_seq)
    res = {name: CheckResult(name) for name in CHECKS if name != "stratification_exactness"}
    n, k = model.n, model.k
    action = model.action

    v1, v2 = sample_oriented_planes(n, count, rng)
    z = embed_coords(v1, v2)
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    resid = quadric_residuals(z, n)
    for i in range(count):
        res["quadric_membership"].record(resid[i] < QUAD_TOL, resid[i], _point_json(z[i]))

    mod = np.abs(z) ** 2
    mu = mod @ action.weight_matrix
    l1 = np.abs(mu).sum(axis=1)
    for i in range(count):
        res["moment_in_polytope"].record(l1[i] <= 1 + BOUNDARY_TOL, max(0.0, l1[i] - 1), _point_json(z[i]))

    for i in range(count):
        s = _compact(k, rng)
        gap = float(np.max(np.abs(moment_map(action, action.act(s, z[i])) - mu[i])))
        res["moment_torus_invariance"].record(gap < QUAD_TOL, gap, _point_json(z[i]))

    # interior/boundary dichotomy: sampled points and exactly constructed ones
    for i in range(count):
        prod = float(np.max(np.abs(products(z[i], model))))
        on_bdry = 1 - l1[i] <= BOUNDARY_TOL
        ok = on_bdry == (prod <= BOUNDARY_TOL)
        res["boundary_characterization"].record(ok, 0.0, _point_json(z[i]))
        b = boundary_fiber_point(random_boundary_moment(k, rng), model, rng).coords
        gap = abs(np.abs(moment_map(action, b)).sum() - 1)
        prod = float(np.max(np.abs(products(b, model))))
        res["boundary_characterization"].record(gap <= BOUNDARY_TOL and prod == 0.0, gap, _point_json(b))

    for i in range(count):
        u = random_boundary_moment(k, rng)
        a = boundary_fiber_point(u, model, rng)
        b = boundary_fiber_point(u, model, rng)
        rec = orbit_equivalence_record(a, b, model, tol, pair_id=i)
        res["boundary_single_orbit"].record(rec.equivalent, rec.max_modulus_defect, rec.to_json())

    for i in range(count):
        u = random_interior_moment(k, rng)
        y = random_quotient_point(model, rng)
        a = fiber_point(u, y, model, rng)
        kind = i % 4
        if kind == 0:
            b = fiber_point(u, y, model, rng)
        elif kind == 1:
            b = fiber_point(u, random_quotient_point(model, rng), model, rng)
        elif kind == 2:
            b = action.act(_compact(k, rng), a)
        else:  # algebraic torus element, then back onto the fibre
            t = np.exp(rng.normal(0, 0.5, k)) * _compact(k, rng)
            b = rescale_to_fiber(action.act(t, a), u, action)
        rec = orbit_equivalence_record(a, b, model, tol, pair_id=i)
        agree = rec.q_gap < tol
        sound = True
        if rec.s is not None:  # recheck the certificate independently of the solver
            sound = action.act(rec.s, a).distance(b) < tol and np.max(np.abs(np.abs(rec.s) - 1)) < tol
        res["interior_q_separation"].record(rec.equivalent == agree and sound, rec.q_gap, rec.to_json())

    for i in range(count):
        t = rng.uniform(0.5, 2.0, k) * _compact(k, rng)
        try:
            gap = q_map(z[i], model).distance(q_map(action.act(t, z[i]), model))
        except ValueError:
            gap = float("inf")
        res["q_invariance"].record(gap < tol, gap, _point_json(z[i]))
    return res


def expected_subdivision(model: QuadricModel) -> Subdivision | None:
    """Stellar subdivision of the cross-polytope for ``k >= 3``, trivial for ``n = 4``."""
    beta = cross_polytope(model.k)
    if model.k >= 3:
        return stellar_subdivision(beta, (0,) * model.k)
    if model.n == 4:
        return Subdivision(beta, tuple(beta.face_polytopes()))
    return None


def check_stratification(model: QuadricModel) -> tuple[CheckResult, dict]:
    res = CheckResult("stratification_exactness")
    strat = model_stratification(model)
    sub = strat.subdivision
    parent = sub.parent
    volume = sum(c.volume(parent.chart) for c in sub.maximal_cells())
    res.record(volume == parent.volume(), float(abs(volume - parent.volume())), "maximal cell volumes")
    expected = expected_subdivision(model)
    stellar = sub == stellar_subdivision(cross_polytope(model.k), (0,) * model.k)
    if expected is not None:
        res.record(sub == expected, 0.0, "cells differ from the expected subdivision")
    details = {
        "cells": len(sub.cells),
        "maximal_cells": len(sub.maximal_cells()),
        "stellar": stellar,
        "trivial": len(sub.maximal_cells()) == 1,
    }
    return res, details


def run_verification(
    n: int,
    samples: int,
    tol: float = 1e-7,
    seed: int = 0,
    workers: int = 1,
    self_test: bool = False,
) -> VerificationReport:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    start = time.perf_counter()
    model = QuadricModel(n)
    sizes = [BATCH_SIZE] * (samples // BATCH_SIZE)
    if samples % BATCH_SIZE:
        sizes.append(samples % BATCH_SIZE)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, streams))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _battery(model, job[0], job[1], tol), jobs))
    else:
        parts = [_battery(model, c, s, tol) for c, s in jobs]
    checks = parts[0]
    for part in parts[1:]:
        checks = {name: checks[name].merge(part[name]) for name in checks}

    if self_test:
        bad = np.zeros(n, dtype=complex)
        bad[0] = bad[1] = 1 / np.sqrt(2)  # residual 1/2
        r = float(quadric_residuals(bad, n))
        checks["quadric_membership"].record(r < QUAD_TOL, r, _point_json(bad))

    strat_result, details = check_stratification(model)
    checks["stratification_exactness"] = strat_result
    report = VerificationReport(n, seed, samples, tol, {c: checks[c] for c in CHECKS}, {"stratification": details})
    report.wall_time = time.perf_counter() - start
    return report
