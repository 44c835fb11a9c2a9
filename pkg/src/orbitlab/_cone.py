"""Double description method for pointed polyhedral cones, in integers."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .lattice import primitive, rref


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _initial_basis(rows: list[tuple[int, ...]], dim: int) -> list[int]:
    """Indices of the first ``dim`` linearly independent rows (greedy)."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []  # (pivot column, row with pivot 1)
    for i, r in enumerate(rows):
        if not any(r):
            continue
        v = [Fraction(x) for x in r]
        for c, e in echelon:
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, e)]
        piv = next((c for c, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = 1 / v[piv]
        echelon.append((piv, [x * inv for x in v]))
        chosen.append(i)
        if len(chosen) == dim:
            break
    return chosen


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x in R^dim : r . x >= 0 for every row r}``.

    The rows must have rank ``dim`` (the cone is pointed). Rays are returned as
    primitive integer vectors. The zero cone yields an empty list.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    basis = _initial_basis(rows, dim)
    if len(basis) < dim:
        raise ValueError("constraint rows do not determine a pointed cone")

    # rays of the simplicial start cone are the columns of B^-1
    bmat = [rows[i] for i in basis]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    aug = [list(bmat[i]) + [int(i == j) for j in range(dim)] for i in range(dim)]
    m, _ = rref(aug)
    for j in range(dim):
        col = [m[i][dim + j] for i in range(dim)]
        rays.append(primitive(col, positive_lead=False))
    for j in range(dim):
        zeros.append(sum(1 << basis[i] for i in range(dim) if i != j))

    done = set(basis)
    for idx, a in enumerate(rows):
        if idx in done or not any(a):
            continue
        bit = 1 << idx
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if bin(common).count("1") < dim - 2:
                    continue
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and (zeros[r] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                ray = tuple(vp * x - vq * y for x, y in zip(rays[q], rays[p]))
                new_rays.append(primitive(ray, positive_lead=False))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
        done.add(idx)
    return rays
