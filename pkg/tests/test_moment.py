from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from orbitlab.errors import OutsidePolytopeError
from orbitlab.moment import (
    LinearTorusAction,
    all_supports,
    is_polystable,
    is_semistable,
    moment_map,
    orbit_images,
    orbit_moment_image,
    stratify,
)
from orbitlab.polytope import barycenter, convex_hull, cross_polytope, stellar_subdivision
from orbitlab.quadric import QuadricModel, embed_plane, products, realizable_supports, sample_oriented_plane

from oracles import cells_by_closure

P2 = LinearTorusAction(((1,), (-1,), (0,)))


def seg(a, b=None):
    return convex_hull([(a,)] if b is None else [(a,), (b,)])


class TestMomentMap:
    def test_example_fixed_points(self):
        assert moment_map(P2, [1, 0, 0]) == pytest.approx([1])
        assert moment_map(P2, [0, 1, 0]) == pytest.approx([-1])
        assert moment_map(P2, [0, 0, 1]) == pytest.approx([0])

    def test_quadric(self):
        a = QuadricModel(4).action
        assert moment_map(a, [1, 0, 0, 0]) == pytest.approx([1, 0])
        assert moment_map(a, np.array([1, 0, 1, 0]) / np.sqrt(2)) == pytest.approx([0.5, 0.5])

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            moment_map(P2, [0, 0, 0])

    def test_mixed_lengths(self):
        with pytest.raises(ValueError):
            LinearTorusAction(((1, 0), (1,)))


class TestOrbitImages:
    def test_example(self):
        assert orbit_moment_image(P2, [1, 0, 1]) == seg(0, 1)
        assert orbit_moment_image(P2, [2.5, 1, 1]) == seg(-1, 1)
        assert orbit_moment_image(P2, [0, 1, 0]) == seg(-1)

    def test_semistability_examples(self):
        z = [1, 0, 1]
        assert is_semistable(P2, z, Fraction(1, 2)) and is_polystable(P2, z, Fraction(1, 2))
        assert is_semistable(P2, z, 0) and not is_polystable(P2, z, 0)
        assert not is_semistable(P2, [1, 0, 0], 0) and not is_polystable(P2, [1, 0, 0], 0)
        assert is_polystable(P2, z, 0.5)

    def test_outside_polytope(self):
        with pytest.raises(OutsidePolytopeError):
            is_semistable(P2, [1, 1, 1], 2)

    @given(st.integers(0, 2**32 - 1), st.integers(4, 9))
    def test_moment_in_image_and_relint(self, seed, n):
        model = QuadricModel(n)
        rng = np.random.default_rng(seed)
        z = embed_plane(sample_oriented_plane(n, rng))
        delta = orbit_moment_image(model.action, z)
        assert delta.contains(moment_map(model.action, z))
        t = np.exp(rng.normal(size=model.k) + 1j * rng.uniform(0, 6.3, model.k))
        w = model.action.act(t, z)
        assert orbit_moment_image(model.action, w) == delta
        assert delta.contains_relint(moment_map(model.action, w), tol=1e-12)


class TestStratify:
    def test_example(self):
        strat = stratify(P2, all_supports(3))
        assert {c.polytope for c in strat.cells} == {seg(-1, 0), seg(0, 1), seg(-1), seg(0), seg(1)}
        images = set(orbit_images(P2, all_supports(3)))
        assert images == {seg(-1, 1), seg(0, 1), seg(-1, 0), seg(-1), seg(0), seg(1)}

    def test_no_supports(self):
        with pytest.raises(ValueError):
            stratify(P2, [])

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_quadric_matches_closure_oracle(self, n):
        model = QuadricModel(n)
        images = orbit_images(model.action, realizable_supports(model))
        strat = stratify(model.action, realizable_supports(model))
        assert {c.polytope for c in strat.cells} == cells_by_closure(images)

    def test_quadric_shapes(self):
        beta2 = cross_polytope(2)
        four = stratify(QuadricModel(4).action, realizable_supports(QuadricModel(4)))
        assert {c.polytope for c in four.cells} == set(beta2.face_polytopes())
        six = stratify(QuadricModel(6).action, realizable_supports(QuadricModel(6)))
        assert six.subdivision == stellar_subdivision(cross_polytope(3), (0, 0, 0))

    def test_boundary_flags(self):
        strat = stratify(QuadricModel(6).action, realizable_supports(QuadricModel(6)))
        assert len(strat.boundary_cells()) == 26
        assert all(c.dim == 3 for c in strat.maximal_cells())
        assert strat.locate((0.1, 0.2, 0.3)).dim == 3
        assert strat.locate((0, 0, 0)).dim == 0

    @given(
        st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=3, max_size=5),
    )
    @settings(max_examples=40)
    def test_projective_space_against_oracle(self, weights):
        action = LinearTorusAction(tuple(weights))
        assume(action.polytope().dim == 2)
        images = orbit_images(action, all_supports(len(weights)))
        strat = stratify(action, all_supports(len(weights)))
        cells = {c.polytope for c in strat.cells}
        assert cells == cells_by_closure(images)
        parent = strat.parent
        assert sum(c.volume() for c in strat.subdivision.maximal_cells()) == parent.volume()
        for c in cells:
            assert strat.subdivision.locate(barycenter(c.vertices)) == c


@pytest.mark.parametrize("n", [4, 6, 8])
def test_boundary_iff_products_vanish(n):
    # constructed points: zero one coordinate of every pair (boundary) or none
    model = QuadricModel(n)
    rng = np.random.default_rng(n)
    for _ in range(200):
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        kill = rng.integers(0, 2, model.k)
        boundary = rng.random() < 0.5
        if boundary:
            for j, (a, b) in enumerate(model.pairs()):
                z[a if kill[j] else b] = 0
        else:
            # restore the quadric relation through the last pair
            a, b = model.pairs()[-1]
            z[b] = -sum(z[p] * z[q] for p, q in model.pairs()[:-1]) / z[a]
        on_bdry = abs(np.abs(moment_map(model.action, z)).sum() - 1) < 1e-12
        vanish = np.max(np.abs(products(z, model))) < 1e-12
        assert on_bdry == vanish == boundary
