from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitlab.errors import KernelDimensionError, SpanError
from orbitlab.lattice import affine_rank, affine_relation, nullspace, primitive, rank, rref, solve


def _check_relation(weights, alpha):
    k = len(weights[0])
    assert sum(alpha) == 0
    for c in range(k):
        assert sum(a * w[c] for a, w in zip(alpha, weights)) == 0
    assert any(alpha)


@pytest.mark.parametrize(
    "weights, expected",
    [
        ([(1,), (-1,), (0,)], (1, 1, -2)),
        ([(0, 0), (1, 0), (0, 1), (1, 1)], (1, -1, -1, 1)),
        # leading entry positive: the negation (-2, 1, 1, 0) spans the same kernel
        ([(0, 0), (1, 0), (-1, 0), (0, 1)], (2, -1, -1, 0)),
    ],
)
def test_affine_relation_examples(weights, expected):
    alpha = affine_relation(weights)
    assert alpha == expected
    _check_relation(weights, alpha)


def test_affine_relation_errors():
    with pytest.raises(SpanError):
        affine_relation([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(KernelDimensionError):
        # five weights spanning the plane: the kernel is two-dimensional
        affine_relation([(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)])


def test_rref_and_rank():
    m, piv = rref([[2, 4], [1, 2], [0, 1]])
    assert piv == [0, 1]
    assert m[0] == [1, 0] and m[1] == [0, 1]
    assert rank([[1, 2, 3], [2, 4, 6]]) == 1


def test_solve_exact():
    x = solve([[2, 1], [1, 3]], [3, 5])
    assert x == (Fraction(4, 5), Fraction(7, 5))


def test_primitive():
    assert primitive([Fraction(2, 3), Fraction(-4, 3)]) == (1, -2)
    assert primitive([-2, 4]) == (1, -2)
    assert primitive([-2, 4], positive_lead=False) == (-1, 2)


small_ints = st.integers(-4, 4)


@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_is_annihilated(rows):
    for v in nullspace(rows, 3):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert len(nullspace(rows, 3)) + rank(rows) == 3


@given(
    st.lists(st.tuples(small_ints, small_ints), min_size=4, max_size=4, unique=True),
    st.integers(1, 5),
)
def test_affine_relation_properties(weights, scale):
    if affine_rank(weights) != 2:
        with pytest.raises(SpanError):
            affine_relation(weights)
        return
    alpha = affine_relation(weights)
    _check_relation(weights, alpha)
    first = next(a for a in alpha if a)
    assert first > 0
    # scaling all weights leaves the primitive relation unchanged
    assert affine_relation([tuple(scale * x for x in w) for w in weights]) == alpha
