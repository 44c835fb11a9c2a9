"""Symbolic orbit-space verdicts and the explicit point maps behind them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import OutsidePolytopeError, OverlapError
from .lattice import affine_relation
from .moment import LinearTorusAction, Stratification
from .polytope import FLOAT_TOL, RationalPolytope, join_decompose
from .projective import ProjectivePoint
from .quotient import Curve, ProjectiveSpace, QuotientDescriptor, model_stratification

JOIN = "join of a sphere with the generic quotient (almost trivial variation of GIT)"
CPLX1_PROJECTIVE = "complexity-one action on projective space (join decomposition of weights)"
HOLED = "holed sphere from boundary cells with curve quotients"
PRODUCT = "no boundary contraction: product of polytope and quotient"
TORIC = "toric action: orbit space is the moment polytope"


@dataclass(frozen=True)
class OrbitSpaceModel:
    provenance: str = field(default="", compare=False, kw_only=True)

    def normalize(self) -> "OrbitSpaceModel":
        return self

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Disc(OrbitSpaceModel):
    dim: int

    def to_json(self):
        return {"variant": "Disc", "dims": [self.dim], "k": None, "provenance": self.provenance}

    def __str__(self):
        return f"Disc({self.dim})"


@dataclass(frozen=True)
class Sphere(OrbitSpaceModel):
    dim: int

    def to_json(self):
        return {"variant": "Sphere", "dims": [self.dim], "k": None, "provenance": self.provenance}

    def __str__(self):
        return f"Sphere({self.dim})"


@dataclass(frozen=True)
class Join(OrbitSpaceModel):
    """``S^sphere_dim * Y``."""

    sphere_dim: int
    quotient: QuotientDescriptor

    def normalize(self):
        if self.quotient.is_point:
            return Disc(self.sphere_dim + 1, provenance=self.provenance)
        if self.quotient.is_p1:
            return Sphere(self.sphere_dim + 3, provenance=self.provenance)
        return self

    def to_json(self):
        return {
            "variant": "Join",
            "dims": [self.sphere_dim, self.quotient.dim],
            "quotient": self.quotient.to_json(),
            "k": None,
            "provenance": self.provenance,
        }

    def __str__(self):
        return f"Join({self.sphere_dim}, {self.quotient})"


@dataclass(frozen=True)
class KHoledSphere(OrbitSpaceModel):
    dim: int
    holes: int

    def normalize(self):
        if self.holes == 0:
            return Sphere(self.dim, provenance=self.provenance)
        return self

    def to_json(self):
        return {"variant": "KHoledSphere", "dims": [self.dim], "k": self.holes, "provenance": self.provenance}

    def __str__(self):
        return f"KHoledSphere({self.dim}, {self.holes})"


@dataclass(frozen=True)
class Product(OrbitSpaceModel):
    polytope_dim: int
    quotient: QuotientDescriptor

    def to_json(self):
        return {
            "variant": "Product",
            "dims": [self.polytope_dim, self.quotient.dim],
            "quotient": self.quotient.to_json(),
            "k": None,
            "provenance": self.provenance,
        }

    def __str__(self):
        return f"Product(P^{self.polytope_dim}, {self.quotient})"


def normalize(model: OrbitSpaceModel) -> OrbitSpaceModel:
    while True:
        nxt = model.normalize()
        if nxt == model and type(nxt) is type(model):
            return nxt
        model = nxt


def homeomorphism_class(model: OrbitSpaceModel) -> OrbitSpaceModel:
    """Coarser normal form for comparisons: a one-holed sphere is a disc."""
    model = normalize(model)
    if isinstance(model, KHoledSphere) and model.holes == 1:
        return Disc(model.dim, provenance=model.provenance)
    return model


def model_from_json(data: dict) -> OrbitSpaceModel:
    v, dims, prov = data["variant"], data["dims"], data.get("provenance", "")
    if v == "Disc":
        return Disc(dims[0], provenance=prov)
    if v == "Sphere":
        return Sphere(dims[0], provenance=prov)
    if v == "KHoledSphere":
        return KHoledSphere(dims[0], data["k"], provenance=prov)
    q = QuotientDescriptor.from_json(data["quotient"])
    if v == "Join":
        return Join(dims[0], q, provenance=prov)
    if v == "Product":
        return Product(dims[0], q, provenance=prov)
    raise ValueError(f"unknown variant {v!r}")


# the Grassmannian -----------------------------------------------------------
def grassmannian_orbit_space(n: int) -> OrbitSpaceModel:
    if n < 4:
        raise ValueError("need n >= 4")
    return normalize(Join(n // 2 - 1, ProjectiveSpace((n + 1) // 2 - 2), provenance=JOIN))


def assemble_orbit_space(strat: Stratification) -> OrbitSpaceModel:
    """Orbit space read off a described stratification.

    Boundary quotients all points and one interior quotient ``Y`` give the
    join ``S^(dim P - 1) * Y``; otherwise a complexity-one picture is handed
    to :func:`classify_cplx1_general`.
    """
    interior = {c.descriptor for c in strat.interior_cells()}
    if len(interior) != 1:
        raise ValueError("interior quotients differ: variation of GIT is not almost trivial")
    y = interior.pop()
    flagged = [c.polytope for c in strat.boundary_cells() if not c.descriptor.is_point]
    if not flagged:
        return normalize(Join(strat.parent.dim - 1, y, provenance=JOIN))
    if y.dim == 1:
        return classify_cplx1_general(strat.parent, flagged, y)
    raise ValueError("boundary quotients are not points and the generic quotient is not a curve")


# explicit maps --------------------------------------------------------------
def join_point_map(u: Sequence[float], y, t: float, tol: float = 1e-12):
    """``[(u, y, t)] -> [(t u, y)]`` from the join to the collapsed disc bundle."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1) > tol:
        raise ValueError("u must be a unit vector")
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    return t * u, y


def join_point_inverse(v: Sequence[float], y):
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v)
    if r == 0:
        raise ValueError("the disc centre has no unique preimage")
    return v / r, y, r


def holed_sphere_map(u: Sequence[float], y: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    """``[(u, y)] -> (u, sqrt(1 - |u|^2) y)`` into the unit sphere.

    Within ``tol`` of the unit sphere ``u`` counts as a boundary point and the
    ``y`` component is dropped exactly.
    """
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    uu = float(u @ u)
    if uu > 1 + tol:
        raise ValueError("u lies outside the unit disc")
    if abs(np.linalg.norm(y) - 1) > tol:
        raise ValueError("y must be a unit vector")
    s = 1.0 - uu
    scale = np.sqrt(s) if s > tol else 0.0
    return np.concatenate([u, scale * y])


@dataclass(frozen=True)
class GluedPoint:
    u: tuple
    y: tuple


def _same_u(a, b, tol) -> bool:
    if all(isinstance(c, (int, Fraction)) for c in (*a, *b)):
        return tuple(map(Fraction, a)) == tuple(map(Fraction, b))
    return bool(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))) <= tol)


def _same_y(a, b, projective: bool, tol: float) -> bool:
    if projective:
        return ProjectivePoint(a).distance(ProjectivePoint(b)) <= tol
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return bool(np.max(np.abs(a - b)) <= tol)


def orbit_space_equivalent(p: GluedPoint, p2: GluedPoint, strat: Stratification, tol: float = FLOAT_TOL) -> bool:
    """Whether two points of ``P x Y`` are glued in the orbit space."""
    for q in (p, p2):
        if not strat.parent.contains(q.u, tol):
            raise OutsidePolytopeError(f"{q.u} lies outside the moment polytope")
    if not _same_u(p.u, p2.u, tol):
        return False
    desc = strat.locate(p.u, tol).descriptor
    if desc is None or desc.is_point:
        return True
    return _same_y(p.y, p2.y, desc.kind in ("projective", "curve"), tol)


# complexity one -------------------------------------------------------------
def classify_projective_cplx1(weights: Sequence[Sequence[int]]) -> OrbitSpaceModel:
    """Disc or sphere for an effective ``(d-1)``-torus acting on ``P^d``."""
    alpha = affine_relation(weights)
    d = len(weights) - 1
    support = [i for i, a in enumerate(alpha) if a != 0]
    _, rest = join_decompose(weights, support)
    if rest.is_empty():
        return Sphere(d + 1, provenance=CPLX1_PROJECTIVE)
    return Disc(d + 1, provenance=CPLX1_PROJECTIVE)


def classify_action(action: LinearTorusAction) -> OrbitSpaceModel:
    """Verdict for an action on the whole projective space."""
    poly = action.polytope()
    complexity = action.n_coords - 1 - poly.dim
    if complexity == 0:
        return Disc(poly.dim, provenance=TORIC)
    if complexity == 1 and poly.dim == action.rank:
        return classify_projective_cplx1(action.weights)
    return assemble_orbit_space(model_stratification(action))


def _covers_boundary(poly: RationalPolytope, cells: list[RationalPolytope]) -> bool:
    for _, idx in poly.facets():
        facet = poly.face(idx)
        inside = [c for c in cells if c.dim == facet.dim and all(facet.contains(v) for v in c.vertices)]
        if sum((c.volume(facet.chart) for c in inside), Fraction(0)) != facet.volume():
            return False
    return True


def classify_cplx1_general(
    poly: RationalPolytope,
    flagged: Sequence[RationalPolytope],
    quotient: QuotientDescriptor | None = None,
) -> OrbitSpaceModel:
    """Orbit space of a complexity-one action from its flagged boundary cells.

    ``flagged`` are the cells of the boundary over which the quotient is a
    curve rather than a point. Cells touching each other merge into one hole;
    a hole spreading over two facets of ``poly`` is rejected.
    """
    quotient = quotient or Curve("P1")
    cells = [c for c in flagged]
    for c in cells:
        if not poly.on_boundary(c.vertices):
            raise ValueError("flagged cell is not on the boundary")
    if cells and _covers_boundary(poly, cells):
        return Product(poly.dim, quotient, provenance=PRODUCT)
    if cells and not quotient.is_p1:
        raise ValueError("boundary contractions force the generic quotient to be P^1")

    maximal = [c for c in cells if not any(c.key < o.key for o in cells)]
    maximal = list(dict.fromkeys(maximal))
    parent = list(range(len(maximal)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(maximal)):
        for j in range(i + 1, len(maximal)):
            if maximal[i].key & maximal[j].key:
                parent[find(i)] = find(j)
    groups: dict[int, list[RationalPolytope]] = {}
    for i, c in enumerate(maximal):
        groups.setdefault(find(i), []).append(c)
    for group in groups.values():
        verts = [v for c in group for v in c.vertices]
        if not poly.on_boundary(verts):
            raise OverlapError("flagged cells on different facets touch each other")
    model = KHoledSphere(poly.dim + 2, len(groups), provenance=HOLED)
    return normalize(model)


def _facet_key(poly: RationalPolytope, facet) -> frozenset[int]:
    if isinstance(facet, RationalPolytope):
        idx = frozenset(poly.vertices.index(v) for v in facet.vertices)
    else:
        idx = frozenset(int(i) for i in facet)
    if idx not in {s for _, s in poly.facets()}:
        raise ValueError(f"{sorted(idx)} is not a facet")
    return idx


def holes_from_degree_function(poly: RationalPolytope, facet_degrees: Mapping) -> OrbitSpaceModel:
    """Count holes from a degree value per facet; positive degree flags a facet."""
    flagged = []
    for facet, deg in facet_degrees.items():
        idx = _facet_key(poly, facet)
        deg = Fraction(deg)
        if deg < 0:
            raise ValueError("facet degrees must be nonnegative")
        if deg > 0:
            flagged.append(poly.face(idx))
    return classify_cplx1_general(poly, flagged, Curve("P1"))

