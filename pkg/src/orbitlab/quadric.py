"""Oriented planes in R^n as points of a smooth complex quadric.

An orthonormal pair ``(v1, v2)`` is sent to ``w = v1 + i v2`` and then to
coordinates ``z_{2j} = w_{2j} + i w_{2j+1}``, ``z_{2j+1} = w_{2j} - i w_{2j+1}``
(0-based), with ``z_{n-1} = w_{n-1}`` when ``n`` is odd. In these coordinates
the image is cut out by ``sum_j z_{2j} z_{2j+1} (+ z_{n-1}^2) = 0`` and the
maximal torus of SO(n) acts diagonally with weights ``+-e_j`` (and 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .moment import LinearTorusAction
from .projective import ProjectivePoint, as_point

EPS_ORTH = 1e-9
EPS_QUAD = 1e-9
MIN_N, MAX_N = 4, 12


@dataclass(frozen=True)
class OrientedPlane:
    v1: np.ndarray
    v2: np.ndarray

    def check(self, eps: float = EPS_ORTH) -> None:
        if (
            abs(np.dot(self.v1, self.v1) - 1) > eps
            or abs(np.dot(self.v2, self.v2) - 1) > eps
            or abs(np.dot(self.v1, self.v2)) > eps
        ):
            raise ValueError("basis is not orthonormal")

    def rotated(self, phi: float) -> "OrientedPlane":
        """The same oriented plane with basis ``(v1, v2) Q_phi``,
        ``Q_phi = [[cos, sin], [-sin, cos]]``; its embedding gains ``e^{i phi}``."""
        c, s = np.cos(phi), np.sin(phi)
        return OrientedPlane(c * self.v1 - s * self.v2, s * self.v1 + c * self.v2)


@dataclass(frozen=True)
class QuadricModel:
    n: int
    eps_quad: float = EPS_QUAD
    action: LinearTorusAction = field(init=False, repr=False)

    def __post_init__(self):
        if not MIN_N <= self.n <= MAX_N:
            raise ValueError(f"n must lie in [{MIN_N}, {MAX_N}], got {self.n}")
        k = self.n // 2
        weights = []
        for j in range(k):
            e = tuple(int(i == j) for i in range(k))
            weights += [e, tuple(-x for x in e)]
        if self.odd:
            weights.append((0,) * k)
        object.__setattr__(self, "action", LinearTorusAction(tuple(weights)))

    @property
    def k(self) -> int:
        return self.n // 2

    @property
    def odd(self) -> bool:
        return self.n % 2 == 1

    @property
    def effective(self) -> bool:
        # for even n the element -I acts trivially; orbits are unaffected
        return self.odd

    @property
    def quotient_dim(self) -> int:
        """Dimension of the generic quotient, ``ceil(n/2) - 2``."""
        return (self.n + 1) // 2 - 2

    def pairs(self) -> list[tuple[int, int]]:
        return [(2 * j, 2 * j + 1) for j in range(self.k)]


def _gram_schmidt(a: np.ndarray, b: np.ndarray):
    v1 = a / np.linalg.norm(a)
    r = b - np.dot(v1, b) * v1
    r -= np.dot(v1, r) * v1
    nr = np.linalg.norm(r)
    return v1, r / nr, nr


def sample_oriented_plane(n: int, rng_seed) -> OrientedPlane:
    """Gram-Schmidt on two standard Gaussian vectors, resampling degenerate draws."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    while True:
        a, b = rng.standard_normal(n), rng.standard_normal(n)
        if np.linalg.norm(a) < 1e-8:
            continue
        v1, v2, nr = _gram_schmidt(a, b)
        if nr > 1e-8:
            return OrientedPlane(v1, v2)


def sample_oriented_planes(n: int, count: int, rng_seed) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sampling: two ``(count, n)`` arrays of orthonormal pairs."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    a = rng.standard_normal((count, n))
    b = rng.standard_normal((count, n))
    v1 = a / np.linalg.norm(a, axis=1, keepdims=True)
    r = b - np.sum(v1 * b, axis=1, keepdims=True) * v1
    r -= np.sum(v1 * r, axis=1, keepdims=True) * v1
    nr = np.linalg.norm(r, axis=1)
    bad = nr < 1e-8
    if np.any(bad):  # vanishingly rare; redraw those rows
        for i in np.flatnonzero(bad):
            p = sample_oriented_plane(n, rng)
            v1[i], r[i], nr[i] = p.v1, p.v2, 1.0
    return v1, r / nr[:, None]


def embed_coords(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Coordinates ``z`` for one pair or a batch (last axis = R^n)."""
    w = np.asarray(v1) + 1j * np.asarray(v2)
    n = w.shape[-1]
    z = np.empty_like(w)
    z[..., 0 : n - 1 : 2] = w[..., 0 : n - 1 : 2] + 1j * w[..., 1:n:2]
    z[..., 1:n:2] = w[..., 0 : n - 1 : 2] - 1j * w[..., 1:n:2]
    if n % 2:
        z[..., n - 1] = w[..., n - 1]
    return z


def embed_plane(p: OrientedPlane) -> ProjectivePoint:
    p.check()
    return ProjectivePoint(embed_coords(p.v1, p.v2))


def quadric_form(z: np.ndarray, n: int) -> np.ndarray:
    """``sum_j z_{2j} z_{2j+1} (+ z_{n-1}^2)`` along the last axis."""
    k = n // 2
    val = np.sum(z[..., 0 : 2 * k : 2] * z[..., 1 : 2 * k : 2], axis=-1)
    if n % 2:
        val = val + z[..., n - 1] ** 2
    return val


def quadric_residual(z, model: QuadricModel) -> float:
    z = as_point(z).normalized().coords
    if len(z) != model.n:
        raise ValueError("point has the wrong number of coordinates")
    return float(abs(quadric_form(z, model.n)))


def quadric_residuals(z: np.ndarray, n: int) -> np.ndarray:
    z = z / np.linalg.norm(z, axis=-1, keepdims=True)
    return np.abs(quadric_form(z, n))


def products(z, model: QuadricModel) -> np.ndarray:
    """The torus-invariant monomials ``z_{2j} z_{2j+1}`` (and ``z_{n-1}^2``)."""
    c = as_point(z).coords
    out = [c[a] * c[b] for a, b in model.pairs()]
    if model.odd:
        out.append(c[-1] ** 2)
    return np.array(out)


def torus_act(t: Sequence[complex], z, model: QuadricModel) -> ProjectivePoint:
    return model.action.act(t, z)


def monomials_on_support(support: Iterable[int], model: QuadricModel) -> int:
    s = set(support)
    count = sum(1 for a, b in model.pairs() if a in s and b in s)
    if model.odd and model.n - 1 in s:
        count += 1
    return count


def is_realizable_support(support: Iterable[int], model: QuadricModel) -> bool:
    """Whether some point of the quadric has exactly this (0-based) support.

    The quadric relation can be met with every coordinate of the support
    nonzero unless exactly one of its monomials survives.
    """
    s = set(support)
    if not s:
        raise ValueError("support must be nonempty")
    return monomials_on_support(s, model) != 1


def realizable_supports(model: QuadricModel) -> Iterable[frozenset[int]]:
    for r in range(1, model.n + 1):
        for s in itertools.combinations(range(model.n), r):
            if is_realizable_support(s, model):
                yield frozenset(s)


def points_to_json(points: Iterable) -> list:
    return [as_point(p).to_json() for p in points]
