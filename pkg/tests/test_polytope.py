import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.spatial import ConvexHull

from orbitlab.errors import NotInteriorError
from orbitlab.polytope import (
    RationalPolytope,
    Subdivision,
    common_refinement,
    convex_hull,
    cross_polytope,
    empty_polytope,
    intersect,
    join_decompose,
    polytope_from_json,
    polytope_to_json,
    project_subdivision,
    stellar_subdivision,
)

from oracles import cross_polytope_face_rule


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def _face_counts(p):
    counts = {}
    for f in p.faces():
        d = p.face_dim(f)
        counts[d] = counts.get(d, 0) + 1
    return counts


def _check_subdivision(sub: Subdivision):
    parent = sub.parent
    maximal = sub.maximal_cells()
    assert sum(c.volume(parent.chart) for c in maximal) == parent.volume()
    keys = {c.key for c in sub.cells}
    # closed under faces
    for c in sub.cells:
        for f in c.face_polytopes():
            assert f.key in keys
    # relative interiors disjoint: barycentres of distinct cells locate uniquely
    for c in sub.cells:
        from orbitlab.polytope import barycenter
        b = barycenter(c.vertices)
        assert sub.locate(b) == c


class TestHull:
    def test_segment(self):
        p = convex_hull([(1,), (-1,), (0,)])
        assert list(p.vertices) == [F(-1), F(1)]
        assert p.dim == 1

    def test_square(self):
        p = convex_hull([(1, 0), (-1, 0), (0, 1), (0, -1)])
        assert _face_counts(p) == {0: 4, 1: 4, 2: 1}

    def test_octahedron(self):
        p = convex_hull([v for j in range(3) for v in (tuple(int(i == j) for i in range(3)), tuple(-int(i == j) for i in range(3)))])
        assert len(p.facets()) == 8
        assert _face_counts(p)[1] == 12

    def test_lower_dimensional(self):
        p = convex_hull([(0, 0, 1), (1, 0, 1), (0, 1, 1), (Fraction(1, 3), Fraction(1, 3), 1)])
        assert p.dim == 2 and len(p.vertices) == 3
        assert len(p.equalities) == 1
        assert p.contains((Fraction(1, 4), Fraction(1, 4), 1))
        assert not p.contains((Fraction(1, 4), Fraction(1, 4), 0))

    def test_empty_is_first_class(self):
        e = empty_polytope(2)
        assert e.is_empty() and e.dim == -1
        assert not e.contains((0, 0))
        assert e.volume() == 0

    @given(
        st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), min_size=5, max_size=14)
    )
    def test_matches_scipy_hull(self, pts):
        arr = np.array(pts, dtype=float)
        assume(np.linalg.matrix_rank(arr[1:] - arr[0]) == 3)
        oracle = ConvexHull(arr)
        p = convex_hull(pts)
        assert {tuple(int(x) for x in v) for v in p.vertices} == {pts[i] for i in oracle.vertices}
        assert float(p.volume()) == pytest.approx(oracle.volume, rel=1e-12)
        # hull of the vertices is the same polytope
        assert convex_hull(p.vertices) == p

    @given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=10))
    def test_membership_against_halfplanes(self, pts):
        p = convex_hull(pts)
        assume(p.dim == 2)
        for x in itertools.product(range(-4, 5), repeat=2):
            inside = p.contains(x)
            assert inside == all(f.value(F(*x)) >= 0 for f, _ in p.facets())
            if inside:
                assert p.contains(np.array(x, dtype=float))


class TestCrossPolytope:
    def test_small(self):
        assert list(cross_polytope(1).vertices) == [F(-1), F(1)]
        sq = cross_polytope(2)
        proper = [f for f in sq.faces() if sq.face_dim(f) < 2]
        assert len(proper) == 8
        e1, me1 = sq.vertices.index(F(1, 0)), sq.vertices.index(F(-1, 0))
        assert not sq.is_face({e1, me1})
        assert len([f for f in cross_polytope(3).faces() if len(f) < 6]) == 26

    def test_bad_k(self):
        with pytest.raises(ValueError):
            cross_polytope(0)

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_face_rule_exhaustive(self, k):
        beta = cross_polytope(k)
        # reindex so that 2j is +e_j and 2j+1 is -e_j
        order = []
        for j in range(k):
            e = tuple(Fraction(int(i == j)) for i in range(k))
            order += [beta.vertices.index(e), beta.vertices.index(tuple(-x for x in e))]
        full = frozenset(range(2 * k))
        for r in range(1, 2 * k):
            for sub in itertools.combinations(range(2 * k), r):
                s = frozenset(sub)
                assert beta.is_face({order[i] for i in s}) == cross_polytope_face_rule(s, k), sub
        assert beta.is_face(full)


class TestJoin:
    def test_examples(self):
        q, d = join_decompose([(1,), (-1,), (0,)], [0, 1, 2])
        assert q == convex_hull([(1,), (-1,)]) and d.is_empty()
        q, d = join_decompose([(0, 0), (1, 0), (-1, 0), (0, 1)], [0, 1, 2])
        assert q == convex_hull([(1, 0), (-1, 0)])
        assert list(d.vertices) == [F(0, 1)]


class TestStellar:
    def test_segment(self):
        sub = stellar_subdivision(cross_polytope(1), (0,))
        assert {tuple(c.vertices) for c in sub.cells} == {
            (F(-1), F(0)), (F(0), F(1)), (F(-1),), (F(0),), (F(1),)
        }

    @pytest.mark.parametrize("k, nmax", [(2, 4), (3, 8), (4, 16)])
    def test_cones_over_facets(self, k, nmax):
        sub = stellar_subdivision(cross_polytope(k), (0,) * k)
        assert len(sub.maximal_cells()) == nmax
        _check_subdivision(sub)

    def test_off_centre(self):
        sub = stellar_subdivision(cross_polytope(2), (Fraction(1, 3), Fraction(1, 5)))
        _check_subdivision(sub)

    def test_not_interior(self):
        with pytest.raises(NotInteriorError):
            stellar_subdivision(cross_polytope(2), (1, 0))


class TestProjection:
    def test_simplex_to_segment(self):
        simplex = convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        sub = project_subdivision(simplex, [[1, -1, 0]])
        assert {tuple(c.vertices) for c in sub.maximal_cells()} == {(F(-1), F(0)), (F(0), F(1))}
        _check_subdivision(sub)

    def test_square_trivial(self):
        sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        sub = project_subdivision(sq, [[1, 0]])
        assert len(sub.maximal_cells()) == 1 and len(sub.cells) == 3

    def test_tetrahedron_to_square(self):
        tet = convex_hull([tuple(int(i == j) for i in range(4)) for j in range(4)])
        sub = project_subdivision(tet, [[0, 1, 0, 1], [0, 0, 1, 1]])
        # the two diagonals cut the unit square into four triangles
        assert len(sub.maximal_cells()) == 4
        assert F(Fraction(1, 2), Fraction(1, 2)) in {v for c in sub.cells for v in c.vertices}
        _check_subdivision(sub)


class TestRefinement:
    def test_segment_images(self):
        images = [convex_hull(p) for p in ([(1,)], [(-1,)], [(0,)], [(1,), (-1,)], [(1,), (0,)], [(-1,), (0,)])]
        sub = common_refinement(images)
        assert len(sub.maximal_cells()) == 2 and len(sub.cells) == 5
        _check_subdivision(sub)

    def test_face_images_of_simplex(self):
        # images of all faces of a simplex under a projection: a valid family
        simplex = convex_hull([tuple(int(i == j) for i in range(5)) for j in range(5)])
        wts = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)]
        images = [convex_hull([wts[i] for i in f]) for f in simplex.faces()]
        sub = common_refinement(images)
        _check_subdivision(sub)
        assert sub == project_subdivision(simplex, [[w[0] for w in wts], [w[1] for w in wts]])

    def test_overlapping_family_rejected(self):
        a = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        b = convex_hull([(1, 0), (3, 0), (1, 2), (3, 2)])
        whole = convex_hull([(0, 0), (3, 0), (0, 2), (3, 2)])
        with pytest.raises(ValueError):
            common_refinement([a, b, whole], whole)

    def test_intersect(self):
        a = convex_hull([(0, 0), (2, 0), (0, 2)])
        b = convex_hull([(1, 0), (1, 2), (3, 0)])
        c = intersect([a, b])
        assert set(c.vertices) == {F(1, 0), F(2, 0), F(1, 1)}


def test_json_round_trip():
    p = convex_hull([(Fraction(1, 2), 0), (0, Fraction(-3, 7)), (1, 1)])
    data = json.loads(json.dumps(polytope_to_json(p)))
    assert data["vertices"][0][0] == [0, 1] or isinstance(data["vertices"][0][0], list)
    assert polytope_from_json(data) == p


def test_rational_point_equalities():
    # regression: equality offsets of affine hulls with rational offsets
    p = convex_hull([(Fraction(1, 2), Fraction(3, 2))])
    q = convex_hull([(0, 1)])
    assert p.contains((Fraction(1, 2), Fraction(3, 2)))
    assert not p.contains((0, 1))
    assert intersect([p, q]).is_empty()
    seg = convex_hull([(Fraction(1, 3), 0), (Fraction(1, 3), 1)])
    assert not seg.contains((0, Fraction(1, 2)))
    assert seg.contains((Fraction(1, 3), Fraction(1, 2)))
