"""Moment maps of linearized torus actions and the induced subdivision.

For an action on ``P^N`` with weights ``u_0..u_N`` the moment image of an
orbit closure is the hull of the weights on the support of the point, so the
whole variation-of-quotient picture is combinatorial once the realizable
supports are known.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import OutsidePolytopeError
from .polytope import (
    FLOAT_TOL,
    RationalPolytope,
    Subdivision,
    common_refinement,
    convex_hull,
    intersect,
    polytope_to_json,
)
from .projective import EPS_SUPP, ProjectivePoint, as_point

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearTorusAction:
    """``t.(z_0 : ... : z_N) = (t^u_0 z_0 : ... : t^u_N z_N)``."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(x != int(x) for u in self.weights for x in u):
            raise ValueError("weights must be integer vectors")
        w = tuple(tuple(int(x) for x in u) for u in self.weights)
        if not w:
            raise ValueError("an action needs at least one weight")
        if len({len(u) for u in w}) != 1:
            raise ValueError("all weights must have the torus rank as length")
        object.__setattr__(self, "weights", w)

    @property
    def rank(self) -> int:
        return len(self.weights[0])

    @property
    def n_coords(self) -> int:
        return len(self.weights)

    @property
    def weight_matrix(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)

    def act(self, t: Sequence[complex], z) -> ProjectivePoint:
        t = np.asarray(t, dtype=complex)
        if t.shape != (self.rank,):
            raise ValueError(f"torus element must have {self.rank} entries")
        if np.any(t == 0):
            raise ValueError("torus element has a zero entry")
        z = as_point(z).coords
        factors = np.array([np.prod(t ** np.array(u)) for u in self.weights])
        return ProjectivePoint(factors * z).normalized()

    def polytope(self) -> RationalPolytope:
        return convex_hull(self.weights)

    def image_of_support(self, support: Iterable[int]) -> RationalPolytope:
        return convex_hull([self.weights[i] for i in support], self.rank)


def moment_map(action: LinearTorusAction, z) -> np.ndarray:
    """Weighted average of the weights by squared coordinate moduli."""
    z = as_point(z).coords
    mod = np.abs(z) ** 2
    return mod @ action.weight_matrix / mod.sum()


def orbit_moment_image(action: LinearTorusAction, z, eps_supp: float = EPS_SUPP) -> RationalPolytope:
    """Moment image of the orbit closure of ``z``."""
    return action.image_of_support(as_point(z).support(eps_supp))


def _membership_point(u):
    u = np.atleast_1d(u) if not isinstance(u, (list, tuple)) else u
    if all(isinstance(c, (int, Fraction)) for c in u):
        return tuple(Fraction(c) for c in u)
    return tuple(float(c) for c in u)


def _check_in_p(action, u, tol):
    if not action.polytope().contains(u, tol):
        raise OutsidePolytopeError(f"{u} lies outside the moment polytope")


def is_semistable(action: LinearTorusAction, z, u, tol: float = FLOAT_TOL) -> bool:
    u = _membership_point(u)
    _check_in_p(action, u, tol)
    return orbit_moment_image(action, z).contains(u, tol)


def is_polystable(action: LinearTorusAction, z, u, tol: float = FLOAT_TOL) -> bool:
    u = _membership_point(u)
    _check_in_p(action, u, tol)
    return orbit_moment_image(action, z).contains_relint(u, tol)


def all_supports(n_coords: int) -> Iterable[frozenset[int]]:
    """Every nonempty coordinate support (all are realizable on ``P^N``)."""
    for r in range(1, n_coords + 1):
        for s in itertools.combinations(range(n_coords), r):
            yield frozenset(s)


def orbit_images(action: LinearTorusAction, supports: Iterable[frozenset[int]]) -> list[RationalPolytope]:
    """Distinct orbit-closure moment images over the given supports."""
    seen: dict[frozenset, frozenset[int]] = {}
    for s in supports:
        key = frozenset(action.weights[i] for i in s)
        seen.setdefault(key, s)
    return [action.image_of_support(s) for s in seen.values()]


def minimal_cell(images: Sequence[RationalPolytope], u) -> RationalPolytope:
    """Intersection of all orbit images containing ``u``."""
    containing = [d for d in images if d.contains(u)]
    if not containing:
        raise OutsidePolytopeError(f"{u} lies in no orbit image")
    return intersect(containing)


@dataclass
class StratCell:
    polytope: RationalPolytope
    boundary: bool
    descriptor: Any = None
    contracted: bool = False  # quotient collapses to a point on some face

    @property
    def dim(self) -> int:
        return self.polytope.dim


@dataclass
class Stratification:
    parent: RationalPolytope
    cells: list[StratCell] = field(default_factory=list)

    @property
    def subdivision(self) -> Subdivision:
        return Subdivision(self.parent, tuple(c.polytope for c in self.cells))

    def maximal_cells(self) -> list[StratCell]:
        return [c for c in self.cells if c.dim == self.parent.dim]

    def boundary_cells(self) -> list[StratCell]:
        return [c for c in self.cells if c.boundary]

    def interior_cells(self) -> list[StratCell]:
        return [c for c in self.cells if not c.boundary]

    def locate(self, u, tol: float = FLOAT_TOL) -> StratCell:
        """The cell whose relative interior contains ``u``."""
        for c in sorted(self.cells, key=lambda c: c.dim):
            if c.polytope.contains(u, tol):
                return c
        raise OutsidePolytopeError(f"{u} lies outside the moment polytope")

    def to_json(self) -> dict:
        return {
            "parent": polytope_to_json(self.parent, faces=False),
            "n_cells": len(self.cells),
            "n_maximal": len(self.maximal_cells()),
            "cells": [
                {
                    **polytope_to_json(c.polytope, faces=False),
                    "boundary": c.boundary,
                    "quotient": c.descriptor.to_json() if c.descriptor is not None else None,
                    "contracted": c.contracted,
                }
                for c in self.cells
            ],
        }


def stratify(
    action: LinearTorusAction,
    supports: Iterable[frozenset[int]] | Callable[[], Iterable[frozenset[int]]],
    describe: Callable[[RationalPolytope, bool], Any] | None = None,
) -> Stratification:
    """Subdivide the moment polytope by intersections of orbit images.

    ``supports`` enumerates the realizable coordinate supports of the
    variety. ``describe(cell, on_boundary)`` attaches a quotient descriptor.
    """
    if callable(supports):
        supports = supports()
    images = orbit_images(action, supports)
    if not images:
        raise ValueError("the realizability oracle produced no supports")
    parent = convex_hull([v for d in images for v in d.vertices], action.rank)
    log.debug("stratify: %d distinct orbit images", len(images))
    sub = common_refinement(images, parent)
    cells = [StratCell(c, c.dim < parent.dim and parent.on_boundary(c.vertices)) for c in sub.cells]
    if describe is not None:
        for c in cells:
            c.descriptor = describe(c.polytope, c.boundary)
        points = [c for c in cells if getattr(c.descriptor, "is_point", False)]
        for c in cells:
            if not c.descriptor.is_point:
                c.contracted = any(p.polytope.key < c.polytope.key for p in points)
    return Stratification(parent, cells)
