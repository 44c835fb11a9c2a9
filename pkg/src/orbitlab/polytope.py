"""Exact V-representation polytopes over the rationals.

A :class:`RationalPolytope` stores its extreme points and derives everything
else on demand: an affine chart of its hull, the facet inequalities, and the
full face lattice. Subdivisions (stellar, projected, common refinements) are
built on top of exact intersection and membership tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ._cone import extreme_rays
from .errors import NotInteriorError
from .lattice import Vector, as_vector, nullspace, primitive, rref, solve

FLOAT_TOL = 1e-9


def _is_exact(x: Sequence) -> bool:
    return all(isinstance(c, (int, Fraction)) and not isinstance(c, bool) for c in x)


def _lcm_scale(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return tuple(int(x * den) for x in row)


def _int_form(x: Vector) -> tuple[tuple[int, ...], int]:
    den = 1
    for c in x:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return tuple(c.numerator * (den // c.denominator) for c in x), den


def barycenter(points: Sequence[Vector]) -> Vector:
    n = len(points)
    return tuple(sum(c) / n for c in zip(*points))


@dataclass(frozen=True)
class Inequality:
    """``offset + normal . x >= 0`` (an equality when used as such)."""

    offset: int
    normal: tuple[int, ...]

    def value(self, x: Sequence) -> Fraction | float:
        return self.offset + sum(a * xi for a, xi in zip(self.normal, x))

    def int_value(self, nums: Sequence[int], den: int) -> int:
        """``den * value(x)`` for ``x = nums / den``; same sign as ``value``."""
        return self.offset * den + sum(a * p for a, p in zip(self.normal, nums))

    def scaled_value(self, x: Sequence) -> float:
        norm = math.sqrt(sum(a * a for a in self.normal)) or 1.0
        return float(self.value(x)) / norm


class AffineChart:
    """Injective coordinate projection of an affine subspace onto ``Q^m``."""

    def __init__(self, points: Sequence[Vector]):
        self.origin = points[0]
        self.ambient_dim = len(self.origin)
        diffs = [tuple(a - b for a, b in zip(p, self.origin)) for p in points[1:]]
        if diffs and any(any(d) for d in diffs):
            m, pivots = rref(diffs)
            self.basis = [tuple(r) for r in m[: len(pivots)]]
            self.coords = tuple(pivots)
        else:
            self.basis = []
            self.coords = ()
        self.dim = len(self.coords)
        normals = nullspace(diffs, self.ambient_dim) if diffs else nullspace([], self.ambient_dim)
        self.equalities = []
        for a in normals:
            b = -sum(x * y for x, y in zip(a, self.origin))
            row = primitive((b,) + tuple(a), positive_lead=False)
            self.equalities.append(Inequality(row[0], row[1:]))

    def to_chart(self, x: Sequence) -> tuple:
        return tuple(x[i] for i in self.coords)

    def from_chart(self, y: Sequence) -> Vector:
        # the rref basis is the identity on the pivot coordinates
        c = [Fraction(yi) - self.origin[i] for yi, i in zip(y, self.coords)]
        out = list(self.origin)
        for ci, row in zip(c, self.basis):
            for j in range(self.ambient_dim):
                out[j] += ci * row[j]
        return tuple(out)


class RationalPolytope:
    """Convex hull of finitely many rational points, given by its vertices.

    The constructor trusts that ``vertices`` are exactly the extreme points;
    use :func:`convex_hull` for arbitrary point sets.
    """

    def __init__(self, vertices: Iterable[Sequence], ambient_dim: int | None = None):
        verts = sorted(set(as_vector(v) for v in vertices))
        if ambient_dim is None:
            if not verts:
                raise ValueError("ambient dimension needed for the empty polytope")
            ambient_dim = len(verts[0])
        self.vertices: tuple[Vector, ...] = tuple(verts)
        self.ambient_dim = ambient_dim

    # identity -----------------------------------------------------------
    @cached_property
    def key(self) -> frozenset:
        return frozenset(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.key))

    def __repr__(self) -> str:
        pts = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"RationalPolytope[{self.dim}]({pts})"

    def is_empty(self) -> bool:
        return not self.vertices

    # geometry -----------------------------------------------------------
    @cached_property
    def chart(self) -> AffineChart:
        if self.is_empty():
            raise ValueError("the empty polytope has no chart")
        return AffineChart(self.vertices)

    @property
    def dim(self) -> int:
        return -1 if self.is_empty() else self.chart.dim

    @cached_property
    def equalities(self) -> list[Inequality]:
        return [] if self.is_empty() else list(self.chart.equalities)

    @cached_property
    def _int_vertices(self) -> list[tuple[tuple[int, ...], int]]:
        return [_int_form(v) for v in self.vertices]

    @cached_property
    def _facet_data(self) -> list[tuple[Inequality, frozenset[int]]]:
        if self.dim <= 0:
            return []
        chart = self.chart
        pts = [chart.to_chart(v) for v in self.vertices]
        rows = [_lcm_scale((Fraction(1),) + tuple(p)) for p in pts]
        out = []
        for ray in extreme_rays(rows, chart.dim + 1):
            b, a = ray[0], ray[1:]
            normal = [0] * self.ambient_dim
            for ai, ci in zip(a, chart.coords):
                normal[ci] = ai
            ineq = Inequality(b, tuple(normal))
            tight = frozenset(i for i, v in enumerate(self._int_vertices) if ineq.int_value(*v) == 0)
            out.append((ineq, tight))
        out.sort(key=lambda t: sorted(t[1]))
        return out

    def facets(self) -> list[tuple[Inequality, frozenset[int]]]:
        """Facet inequalities paired with the indices of the vertices on them."""
        return list(self._facet_data)

    @cached_property
    def _faces(self) -> dict[frozenset[int], int]:
        if self.is_empty():
            return {}
        full = frozenset(range(len(self.vertices)))
        faces = {full: self.dim}
        facet_sets = [s for _, s in self._facet_data]
        level = [full]
        d = self.dim
        while d > 0:
            nxt: set[frozenset[int]] = set()
            for g in level:
                cands = {g & f for f in facet_sets if not g <= f}
                cands.discard(frozenset())
                for c in cands:
                    if not any(c < o for o in cands):
                        nxt.add(c)
            d -= 1
            for c in nxt:
                faces[c] = d
            level = list(nxt)
        return faces

    def faces(self, dim: int | None = None) -> list[frozenset[int]]:
        """Nonempty faces (the polytope included) as vertex index sets."""
        out = [f for f, d in self._faces.items() if dim is None or d == dim]
        return sorted(out, key=lambda f: (len(f), sorted(f)))

    def face_dim(self, idx: frozenset[int]) -> int:
        return self._faces[idx]

    def is_face(self, idx: Iterable[int]) -> bool:
        s = frozenset(idx)
        return not s or s in self._faces

    def face(self, idx: Iterable[int]) -> "RationalPolytope":
        return RationalPolytope([self.vertices[i] for i in idx], self.ambient_dim)

    def face_polytopes(self, proper: bool = False) -> list["RationalPolytope"]:
        out = [self.face(f) for f in self.faces()]
        if proper:
            out = [f for f in out if f.dim < self.dim]
        return out

    # membership ---------------------------------------------------------
    def contains(self, x: Sequence, tol: float = FLOAT_TOL) -> bool:
        if self.is_empty():
            return False
        if _is_exact(x):
            x = as_vector(x)
            if self.dim == 0:
                return x == self.vertices[0]
            nums, den = _int_form(x)
            return all(e.int_value(nums, den) == 0 for e in self.equalities) and all(
                f.int_value(nums, den) >= 0 for f, _ in self._facet_data
            )
        return all(abs(e.scaled_value(x)) <= tol for e in self.equalities) and all(
            f.scaled_value(x) >= -tol for f, _ in self._facet_data
        )

    def contains_relint(self, x: Sequence, tol: float = FLOAT_TOL) -> bool:
        if not self.contains(x, tol):
            return False
        if _is_exact(x):
            nums, den = _int_form(as_vector(x))
            return all(f.int_value(nums, den) > 0 for f, _ in self._facet_data)
        return all(f.scaled_value(x) > tol for f, _ in self._facet_data)

    def on_boundary(self, points: Iterable[Sequence]) -> bool:
        """True if all points lie on one common facet (relative boundary)."""
        pts = [_int_form(as_vector(p)) for p in points]
        return any(all(f.int_value(*p) == 0 for p in pts) for f, _ in self._facet_data)

    def volume(self, chart: AffineChart | None = None) -> Fraction:
        """Exact volume measured in ``chart`` (default: the polytope's own)."""
        if self.is_empty():
            return Fraction(0)
        chart = chart or self.chart
        image = RationalPolytope([chart.to_chart(v) for v in self.vertices], chart.dim)
        if image.dim < chart.dim:
            return Fraction(0)
        if chart.dim == 0:
            return Fraction(1)
        total = Fraction(0)
        for simplex in _pulling_triangulation(image):
            v0 = simplex[0]
            mat = [[a - b for a, b in zip(v, v0)] for v in simplex[1:]]
            total += abs(_det(mat))
        return total / math.factorial(chart.dim)


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _pulling_triangulation(poly: RationalPolytope) -> list[list[Vector]]:
    if poly.dim == 0:
        return [[poly.vertices[0]]]
    v0 = poly.vertices[0]
    out = []
    for _, idx in poly.facets():
        if 0 in idx:
            continue
        for s in _pulling_triangulation(poly.face(idx)):
            out.append([v0] + s)
    return out


def empty_polytope(ambient_dim: int) -> RationalPolytope:
    return RationalPolytope([], ambient_dim)


def convex_hull(points: Iterable[Sequence], ambient_dim: int | None = None) -> RationalPolytope:
    pts = sorted(set(as_vector(p) for p in points))
    if not pts:
        if ambient_dim is None:
            raise ValueError("empty point set needs an ambient dimension")
        return empty_polytope(ambient_dim)
    trial = RationalPolytope(pts)
    if trial.dim <= 0:
        return trial
    chart = trial.chart
    facets = trial.facets()
    verts = []
    for i, p in enumerate(pts):
        normals = [
            [Fraction(f.normal[c]) for c in chart.coords] for f, idx in facets if i in idx
        ]
        if normals and len(rref(normals)[1]) == chart.dim:
            verts.append(p)
    return RationalPolytope(verts, len(pts[0]))


def cross_polytope(k: int) -> RationalPolytope:
    """``conv(+-e_1, ..., +-e_k)``."""
    if k < 1:
        raise ValueError("cross-polytope needs k >= 1")
    verts = []
    for j in range(k):
        for s in (1, -1):
            verts.append(tuple(s if i == j else 0 for i in range(k)))
    return RationalPolytope(verts, k)


def intersect(polys: Sequence[RationalPolytope]) -> RationalPolytope:
    """Exact intersection of polytopes living in a common ambient space."""
    if not polys:
        raise ValueError("nothing to intersect")
    k = polys[0].ambient_dim
    if any(p.is_empty() for p in polys):
        return empty_polytope(k)
    if len(polys) == 1:
        return polys[0]
    rows = {(1,) + (0,) * k}
    for p in polys:
        for e in p.equalities:
            rows.add((e.offset,) + e.normal)
            rows.add((-e.offset,) + tuple(-a for a in e.normal))
        for f, _ in p.facets():
            rows.add((f.offset,) + f.normal)
    verts = []
    for ray in extreme_rays(sorted(rows), k + 1):
        if ray[0] > 0:
            verts.append(tuple(Fraction(x, ray[0]) for x in ray[1:]))
    return RationalPolytope(verts, k)


def join_decompose(vertices: Sequence[Sequence], support: Iterable[int]):
    """Split a vertex list into the hull over ``support`` and the hull of the rest.

    The second polytope may be empty; joining with the empty polytope is the
    identity.
    """
    support = set(support)
    pts = [as_vector(v) for v in vertices]
    k = len(pts[0])
    q = convex_hull([p for i, p in enumerate(pts) if i in support], k)
    rest = convex_hull([p for i, p in enumerate(pts) if i not in support], k)
    return q, rest


@dataclass(eq=False)
class Subdivision:
    """A polyhedral subdivision of ``parent``; cells are closed under faces."""

    parent: RationalPolytope
    cells: tuple[RationalPolytope, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.cells = tuple(sorted(set(self.cells), key=lambda c: (c.dim, c.vertices)))

    @property
    def keys(self) -> frozenset:
        return frozenset(c.key for c in self.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subdivision):
            return NotImplemented
        return self.parent == other.parent and self.keys == other.keys

    def maximal_cells(self) -> list[RationalPolytope]:
        return [c for c in self.cells if c.dim == self.parent.dim]

    def cells_of_dim(self, d: int) -> list[RationalPolytope]:
        return [c for c in self.cells if c.dim == d]

    def locate(self, x: Sequence, tol: float = FLOAT_TOL) -> RationalPolytope | None:
        """The cell whose relative interior contains ``x``."""
        for c in self.cells:  # sorted by dimension, lowest first
            if c.contains(x, tol):
                return c
        return None


def stellar_subdivision(poly: RationalPolytope, center: Sequence) -> Subdivision:
    """Cone every proper face of ``poly`` from an interior point."""
    c = as_vector(center)
    if not poly.contains_relint(c):
        raise NotInteriorError(f"{c} is not in the relative interior")
    cells = [RationalPolytope([c], poly.ambient_dim)]
    for f in poly.face_polytopes(proper=True):
        cells.append(f)
        cells.append(RationalPolytope(list(f.vertices) + [c], poly.ambient_dim))
    return Subdivision(poly, tuple(cells))


def _in_chart(poly: RationalPolytope, chart: AffineChart) -> RationalPolytope:
    return RationalPolytope([chart.to_chart(v) for v in poly.vertices], chart.dim)


def _generic_direction(m: int, attempt: int) -> Vector:
    primes = [97, 101, 103, 107, 109, 113, 127, 131]
    p = primes[attempt % len(primes)]
    return tuple(Fraction(1, p**i) for i in range(m))


def common_refinement(
    polys: Sequence[RationalPolytope], parent: RationalPolytope | None = None
) -> Subdivision:
    """Subdivision of ``parent`` whose cell at ``u`` is the intersection of all
    given polytopes containing ``u``.

    The given polytopes must cover ``parent`` and behave like moment images of
    orbit closures (for instance, every face of a member is itself an
    intersection of members); otherwise the cells overlap and a ValueError is
    raised. Maximal cells are found by
    walking across interior walls starting from a generic point; the remaining
    cells are their faces.
    """
    if parent is None:
        parent = convex_hull([v for p in polys for v in p.vertices], polys[0].ambient_dim)
    chart = parent.chart
    m = chart.dim
    inside = list({_in_chart(p, chart) for p in polys if not p.is_empty()})
    top = _in_chart(parent, chart)

    def cell_at(x: Vector) -> RationalPolytope:
        containing = [d for d in inside if d.contains(x)]
        if not containing:
            raise ValueError(f"point {x} is not covered by the given polytopes")
        return intersect(containing)

    if m == 0:
        return Subdivision(parent, (parent,))

    center = barycenter(top.vertices)
    start = None
    for attempt in range(64):
        g = _generic_direction(m, attempt)
        step = Fraction(1, 2 ** (attempt // 8 + 3))
        x = tuple(c + step * gi for c, gi in zip(center, g))
        if not top.contains_relint(x):
            continue
        cand = cell_at(x)
        if cand.dim == m:
            start = cand
            break
    if start is None:
        raise RuntimeError("failed to find a generic starting point")

    found = {start}
    queue = [start]
    while queue:
        cell = queue.pop()
        for ineq, idx in cell.facets():
            wall = [cell.vertices[i] for i in idx]
            if top.on_boundary(wall):
                continue
            base = barycenter(wall)
            scale = max(abs(a) for a in ineq.normal)
            eps = Fraction(1, 4 * scale)
            for _ in range(80):
                x = tuple(b - eps * a for b, a in zip(base, ineq.normal))
                if top.contains(x):
                    nb = cell_at(x)
                    if nb.dim == m and set(wall) <= set(nb.vertices):
                        if nb not in found:
                            found.add(nb)
                            queue.append(nb)
                        break
                eps /= 2
            else:
                raise ValueError("cells do not fit together; the family does not induce a subdivision")

    cells = set()
    for cell in found:
        for f in cell.face_polytopes():
            cells.add(RationalPolytope([chart.from_chart(v) for v in f.vertices], parent.ambient_dim))
    return Subdivision(parent, tuple(cells))


def project_subdivision(q: RationalPolytope, linear_map: Sequence[Sequence]) -> Subdivision:
    """Subdivision of ``F(q)`` induced by the images of all faces of ``q``.

    ``linear_map`` is the matrix of ``F`` (one row per target coordinate).
    """
    fmat = [as_vector(r) for r in linear_map]
    target = len(fmat)

    def image(v: Vector) -> Vector:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in fmat)

    images = [convex_hull([image(v) for v in f.vertices], target) for f in q.face_polytopes()]
    parent = convex_hull([image(v) for v in q.vertices], target)
    return common_refinement(images, parent)


# serialization --------------------------------------------------------------
def rational_to_json(x) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def rational_from_json(x) -> Fraction:
    if isinstance(x, list):
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        raise ValueError("rational entries must be integers or [num, den] pairs")
    return Fraction(int(x))


def polytope_to_json(poly: RationalPolytope, faces: bool = True) -> dict:
    out = {
        "vertices": [[rational_to_json(c) for c in v] for v in poly.vertices],
        "ambient_dim": poly.ambient_dim,
        "dim": poly.dim,
    }
    if faces:
        out["faces"] = [sorted(f) for f in poly.faces()]
    return out


def polytope_from_json(data: dict) -> RationalPolytope:
    verts = [tuple(rational_from_json(c) for c in v) for v in data["vertices"]]
    return convex_hull(verts, data.get("ambient_dim"))
