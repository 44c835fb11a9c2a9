"""Quotients of moment fibres: the invariant map ``q``, the constructive
orbit-equivalence solver and per-cell quotient descriptors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import IndeterminacyError, OffQuadricError
from .moment import LinearTorusAction, Stratification, all_supports, moment_map, stratify
from .polytope import RationalPolytope, barycenter
from .projective import EPS_SUPP, ProjectivePoint, as_point
from .quadric import QuadricModel, products, quadric_residual, realizable_supports

ORBIT_TOL = 1e-7


@dataclass(frozen=True)
class QuotientDescriptor:
    """What the quotient of a cell's semistable locus looks like.

    ``kind`` is one of ``point``, ``projective``, ``curve`` or ``toric``.
    """

    kind: str
    dim: int = 0
    tag: str | None = None

    @property
    def is_point(self) -> bool:
        return self.dim == 0

    @property
    def is_p1(self) -> bool:
        return (self.kind == "projective" and self.dim == 1) or (
            self.kind == "curve" and self.tag == "P1"
        )

    def to_json(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.tag is not None:
            out["tag"] = self.tag
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QuotientDescriptor":
        return cls(data["kind"], int(data.get("dim", 0)), data.get("tag"))

    def __str__(self) -> str:
        if self.kind == "point":
            return "pt"
        if self.kind == "projective":
            return f"P^{self.dim}"
        if self.kind == "curve":
            return f"Curve({self.tag})"
        return f"Toric({self.dim})"


def Point() -> QuotientDescriptor:
    return QuotientDescriptor("point", 0)


def ProjectiveSpace(m: int) -> QuotientDescriptor:
    return Point() if m == 0 else QuotientDescriptor("projective", m)


def Curve(tag: str = "P1") -> QuotientDescriptor:
    return QuotientDescriptor("curve", 1, tag)


def Toric(dim: int) -> QuotientDescriptor:
    return QuotientDescriptor("toric", dim)


# the invariant map ----------------------------------------------------------
def q_coords(z, model: QuadricModel) -> np.ndarray:
    """Invariant coordinates ``(z_2 z_3 : ... : z_{n-2} z_{n-1})``, 0-based.

    For odd ``n`` the square of the weight-zero coordinate is appended.
    """
    p = products(as_point(z).normalized(), model)
    return p[1:]


def q_map(z, model: QuadricModel, tol: float = 1e-12) -> ProjectivePoint:
    c = q_coords(z, model)
    if len(c) == 0 or np.max(np.abs(c)) <= tol:
        raise IndeterminacyError("all defining products vanish")
    return ProjectivePoint(c).canonical(eps=tol)


# orbit equivalence ----------------------------------------------------------
@dataclass
class OrbitEquivalenceRecord:
    pair_id: object
    mu_gap: float
    q_gap: float
    s: np.ndarray | None
    max_modulus_defect: float
    residual: float

    @property
    def equivalent(self) -> bool:
        return self.s is not None

    def to_json(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "mu_gap": self.mu_gap,
            "q_gap": self.q_gap,
            "s": None if self.s is None else [[float(x.real), float(x.imag)] for x in self.s],
            "max_modulus_defect": self.max_modulus_defect,
            "residual": self.residual,
        }


def _q_gap(a: ProjectivePoint, b: ProjectivePoint, model: QuadricModel) -> float:
    try:
        qa = q_map(a, model)
    except IndeterminacyError:
        qa = None
    try:
        qb = q_map(b, model)
    except IndeterminacyError:
        qb = None
    if qa is None and qb is None:
        return 0.0
    if qa is None or qb is None:
        return float("inf")
    return qa.distance(qb)


def _torus_from_pairs(a: np.ndarray, w: np.ndarray, model: QuadricModel, eps: float) -> np.ndarray:
    s = np.ones(model.k, dtype=complex)
    for j, (p, q) in enumerate(model.pairs()):
        # s_j = w_p / a_p or a_q / w_q, whichever denominator is larger
        if abs(a[p]) >= abs(w[q]) and abs(a[p]) > eps:
            s[j] = w[p] / a[p]
        elif abs(w[q]) > eps:
            s[j] = a[q] / w[q]
    return s


def orbit_equivalence_record(
    z, z2, model: QuadricModel, tol: float = ORBIT_TOL, pair_id=None, eps: float = EPS_SUPP
) -> OrbitEquivalenceRecord:
    """Try to build ``s`` in the compact torus with ``s.z = z2`` projectively.

    The candidate is assembled pair by pair from coordinate ratios after
    matching the representatives' invariant products; it is accepted only if
    every ``|s_j|`` is 1 and ``s.z`` reproduces ``z2``, both within ``tol``.
    """
    a = as_point(z).normalized()
    b = as_point(z2).normalized()
    for p in (a, b):
        if quadric_residual(p, model) >= model.eps_quad:
            raise OffQuadricError("point is not on the quadric")
    mu_gap = float(np.max(np.abs(moment_map(model.action, a) - moment_map(model.action, b))))
    q_gap = _q_gap(a, b, model)
    if mu_gap > tol:
        return OrbitEquivalenceRecord(pair_id, mu_gap, q_gap, None, float("inf"), float("inf"))

    pa, pb = products(a, model), products(b, model)
    i = int(np.argmax(np.abs(pb)))
    if abs(pb[i]) > eps**2:
        root = np.sqrt(pa[i] / pb[i])
        scales = [root, -root]
    else:
        scales = [1.0]

    best = None
    for c in scales:
        w = c * b.coords
        s = _torus_from_pairs(a.coords, w, model, eps)
        if np.min(np.abs(s)) < eps:
            continue
        defect = float(np.max(np.abs(np.abs(s) - 1)))
        resid = model.action.act(s, a).distance(b)
        if best is None or max(defect, resid) < max(best[1], best[2]):
            best = (s, defect, resid)
    if best is None:
        return OrbitEquivalenceRecord(pair_id, mu_gap, q_gap, None, float("inf"), float("inf"))
    s, defect, resid = best
    ok = defect < tol and resid < tol
    return OrbitEquivalenceRecord(pair_id, mu_gap, q_gap, s if ok else None, defect, resid)


def t_orbit_equivalence(z, z2, model: QuadricModel, tol: float = ORBIT_TOL) -> np.ndarray | None:
    """Compact torus element carrying ``z`` to ``z2``, or ``None``."""
    return orbit_equivalence_record(z, z2, model, tol).s


# constructive fibre points --------------------------------------------------
def _phases(rng, size) -> np.ndarray:
    return np.exp(1j * rng.uniform(0, 2 * np.pi, size))


def boundary_fiber_point(u: Sequence[float], model: QuadricModel, rng=None) -> ProjectivePoint:
    """A point with moment image ``u`` on the boundary of the cross-polytope.

    The zero coordinates are set exactly; phases are random when ``rng`` is
    given.
    """
    u = np.asarray(u, dtype=float)
    if abs(np.sum(np.abs(u)) - 1) > 1e-12:
        raise ValueError("u is not on the boundary of the cross-polytope")
    ph = _phases(rng, model.k) if rng is not None else np.ones(model.k)
    z = np.zeros(model.n, dtype=complex)
    for j, (p, q) in enumerate(model.pairs()):
        if u[j] > 0:
            z[p] = np.sqrt(u[j]) * ph[j]
        elif u[j] < 0:
            z[q] = np.sqrt(-u[j]) * ph[j]
    return ProjectivePoint(z)


def fiber_point(u: Sequence[float], y: Sequence[complex], model: QuadricModel, rng=None) -> ProjectivePoint:
    """A point of the quadric with moment image ``u`` (interior) and ``q = y``."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=complex)
    if np.sum(np.abs(u)) >= 1:
        raise ValueError("u must lie in the interior of the cross-polytope")
    if len(y) != model.quotient_dim + 1:
        raise ValueError(f"quotient point needs {model.quotient_dim + 1} coordinates")
    if model.odd:
        prods, sq = y[:-1], y[-1]
    else:
        prods, sq = y, 0.0
    base = np.concatenate([[-np.sum(prods) - sq], prods])
    mods = np.abs(base)
    if not np.any(mods) and sq == 0:
        raise IndeterminacyError("q coordinates vanish")

    def total(rho):
        return np.sum(np.sqrt(u**2 + 4 * rho**2 * mods**2)) + rho * abs(sq) - 1

    hi = 1.0
    while total(hi) < 0:
        hi *= 2
    rho = brentq(total, 0.0, hi, xtol=1e-17, rtol=1e-15)
    root = np.sqrt(u**2 + 4 * rho**2 * mods**2)
    a = (u + root) / 2
    b = a - u
    ph = _phases(rng, 2 * model.k) if rng is not None else np.ones(2 * model.k)
    z = np.zeros(model.n, dtype=complex)
    for j, (p, q) in enumerate(model.pairs()):
        if a[j] > 0:
            z[p] = np.sqrt(a[j]) * ph[2 * j]
            z[q] = rho * base[j] / z[p] if mods[j] > 0 else np.sqrt(b[j]) * ph[2 * j + 1]
        else:
            z[q] = np.sqrt(b[j]) * ph[2 * j + 1]
    if model.odd:
        z[-1] = np.sqrt(rho * sq + 0j)
    return ProjectivePoint(z).normalized()


def rescale_to_fiber(
    z, u: Sequence[float], action: LinearTorusAction, tol: float = 1e-14, max_iter: int = 100
) -> ProjectivePoint:
    """Move ``z`` along the real torus until its moment image is ``u``.

    Minimizes the strictly convex ``log sum |z_i|^2 e^{2<w_i, x>} - 2<u, x>``
    by damped Newton steps; its gradient is ``2 (mu(e^x . z) - u)``. The
    target must lie in the relative interior of the orbit image of ``z``.
    """
    c = as_point(z).normalized().coords
    w = action.weight_matrix
    u = np.asarray(u, dtype=float)
    mod = np.abs(c) ** 2
    keep = mod > 0
    w, mod = w[keep], mod[keep]

    def f(x):
        e = np.log(mod) + 2 * w @ x
        m = e.max()
        return m + np.log(np.exp(e - m).sum()) - 2 * u @ x

    x = np.zeros(action.rank)
    for _ in range(max_iter):
        e = np.log(mod) + 2 * w @ x
        p = np.exp(e - e.max())
        p /= p.sum()
        mu = p @ w
        grad = mu - u
        if np.max(np.abs(grad)) < tol:
            break
        cov = (w * p[:, None]).T @ w - np.outer(mu, mu)
        step = np.linalg.lstsq(cov, -grad, rcond=None)[0] / 2
        t = 1.0
        if np.max(np.abs(grad)) > 1e-6:  # damping; near the optimum f is flat to rounding
            f0 = f(x)
            while f(x + t * step) > f0 + 1e-4 * t * 2 * (grad @ step) and t > 1e-12:
                t /= 2
        x = x + t * step
    return action.act(np.exp(x), c)


# descriptors ----------------------------------------------------------------
def _fiber_dimension(action: LinearTorusAction, cell: RationalPolytope) -> int:
    """Dimension of the polytope of convex representations of a relint point."""
    u = barycenter(cell.vertices)
    poly = action.polytope()
    tight = [f for f, _ in poly.facets() if f.value(u) == 0]
    carrier = [v for i, v in enumerate(poly.vertices) if all(f.value(v) == 0 for f in tight)]
    carrier_dim = RationalPolytope(carrier, action.rank).dim
    on_carrier = [w for w in action.weights if all(f.value(w) == 0 for f in tight)]
    return len(on_carrier) - 1 - carrier_dim


def quotient_descriptor(cell: RationalPolytope, model, boundary: bool | None = None) -> QuotientDescriptor:
    """Quotient of the semistable locus over ``cell``.

    ``model`` is a :class:`QuadricModel` or a :class:`LinearTorusAction`
    (meaning the action on the whole projective space).
    """
    if isinstance(model, QuadricModel):
        if boundary is None:
            boundary = model.action.polytope().on_boundary(cell.vertices)
        return Point() if boundary else ProjectiveSpace(model.quotient_dim)
    f = _fiber_dimension(model, cell)
    if f == 0:
        return Point()
    if f == 1:
        return Curve("P1")
    return Toric(f)


def model_stratification(model) -> Stratification:
    """Stratify a quadric model or a projective-space action, with descriptors."""
    if isinstance(model, QuadricModel):
        action, supports = model.action, realizable_supports(model)
    else:
        action, supports = model, all_supports(model.n_coords)
    return stratify(action, supports, lambda c, bnd: quotient_descriptor(c, model, bnd))


__all__ = [
    "Curve",
    "OrbitEquivalenceRecord",
    "Point",
    "ProjectiveSpace",
    "QuotientDescriptor",
    "Toric",
    "boundary_fiber_point",
    "fiber_point",
    "model_stratification",
    "orbit_equivalence_record",
    "q_map",
    "quotient_descriptor",
    "rescale_to_fiber",
    "t_orbit_equivalence",
]
