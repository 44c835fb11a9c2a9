"""Exact rational linear algebra on weight vectors.

Everything here works with :class:`fractions.Fraction` or ``int`` entries and
never touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import KernelDimensionError, SpanError

Vector = tuple[Fraction, ...]


def as_vector(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : A x = 0}`` for the matrix with the given rows."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -m[i][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve the square nonsingular system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or n in pivots:
        raise ValueError("singular system")
    return tuple(m[i][n] for i in range(n))


def primitive(v: Sequence, positive_lead: bool = True) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers.

    With ``positive_lead`` the first nonzero entry is made positive; otherwise
    the orientation of ``v`` is kept.
    """
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    if positive_lead:
        lead = next(x for x in ints if x != 0)
        if lead < 0:
            ints = [-x for x in ints]
    return tuple(ints)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for an empty set)."""
    if not points:
        return -1
    p0 = [Fraction(x) for x in points[0]]
    diffs = [[Fraction(x) - y for x, y in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def affine_relation(weights: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """The primitive affine dependency among ``d + 1`` weights in ``Z^(d-1)``.

    Returns integers ``a`` with ``sum(a_i * u_i) == 0`` and ``sum(a_i) == 0``,
    coprime, first nonzero entry positive.

    >>> affine_relation([(1,), (-1,), (0,)])
    (1, 1, -2)
    """
    if not weights:
        raise SpanError("no weights given")
    k = len(weights[0])
    if any(len(w) != k for w in weights):
        raise ValueError("weights of unequal length")
    if affine_rank(weights) != k:
        raise SpanError(f"weights do not affinely span R^{k}")
    rows = [[w[i] for w in weights] for i in range(k)]
    rows.append([1] * len(weights))
    kernel = nullspace(rows, len(weights))
    if len(kernel) != 1:
        raise KernelDimensionError(
            f"expected a one-dimensional relation space, got dimension {len(kernel)}"
        )
    return primitive(kernel[0])
