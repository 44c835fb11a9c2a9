from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_SUPP = 1e-9


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Homogeneous complex coordinates of a point in projective space."""

    coords: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=complex).copy()
        if z.ndim != 1:
            raise ValueError("coordinates must be a vector")
        if not np.any(z):
            raise ValueError("the zero vector is not a projective point")
        z.setflags(write=False)
        object.__setattr__(self, "coords", z)

    def __len__(self) -> int:
        return len(self.coords)

    def normalized(self) -> "ProjectivePoint":
        return ProjectivePoint(self.coords / np.linalg.norm(self.coords))

    def canonical(self, eps: float = EPS_SUPP) -> "ProjectivePoint":
        """Unit norm, first non-negligible coordinate real and positive."""
        z = self.coords / np.linalg.norm(self.coords)
        lead = next(c for c in z if abs(c) > eps)
        return ProjectivePoint(z * (abs(lead) / lead))

    def support(self, eps: float = EPS_SUPP) -> frozenset[int]:
        z = self.coords / np.linalg.norm(self.coords)
        return frozenset(int(i) for i in np.flatnonzero(np.abs(z) > eps))

    def distance(self, other: "ProjectivePoint") -> float:
        """Chordal distance ``min_phase |a - e^{i t} b|`` of the unit representatives."""
        a = self.coords / np.linalg.norm(self.coords)
        b = other.coords / np.linalg.norm(other.coords)
        c = np.vdot(b, a)
        phase = c / abs(c) if abs(c) > 0 else 1.0
        # the direct difference avoids cancellation in sqrt(2 - 2|c|)
        return float(np.linalg.norm(a - phase * b))

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "ProjectivePoint":
        return cls(np.array([complex(re, im) for re, im in data]))


def as_point(z) -> ProjectivePoint:
    return z if isinstance(z, ProjectivePoint) else ProjectivePoint(np.asarray(z))
