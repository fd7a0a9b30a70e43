import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minhomology import shapes
from minhomology.complex import (ChainVector, SimplicialComplex, WeightVector, boundary_of, build_boundary,
                                 chain_area, complex_components, cycle_difference, is_cycle, orient,
                                 simplex_measure, simplex_measures, support_components)
from minhomology.errors import DimensionMismatch, InvalidComplex, InvalidDimension, ZeroAreaSimplex

from _support import loops_chain


def single_triangle():
    return SimplicialComplex([[0, 0], [1, 0], [0, 1]], [(0, 1, 2)])


def test_closure_and_ordering():
    c = single_triangle()
    assert c.f_vector() == (3, 3, 1)
    assert c.simplices(1) == ((0, 1), (0, 2), (1, 2))
    # given simplices keep input order, vertex order is normalised
    c = SimplicialComplex(np.zeros((4, 3)), [(2, 1, 3), (0, 2, 1)])
    assert c.simplices(2) == ((1, 2, 3), (0, 1, 2))


def test_invalid_simplices_rejected():
    with pytest.raises(InvalidComplex):
        SimplicialComplex(np.zeros((3, 2)), [(0, 1, 5)])
    with pytest.raises(InvalidComplex):
        SimplicialComplex(np.zeros((3, 2)), [(0, 1, 1)])


def test_orient_parity():
    assert orient((0, 1, 2)) == ((0, 1, 2), 1)
    assert orient((1, 0, 2)) == ((0, 1, 2), -1)
    assert orient((2, 0, 1)) == ((0, 1, 2), 1)
    assert orient((3, 1)) == ((1, 3), -1)


def test_boundary_single_triangle_column():
    c = single_triangle()
    B = build_boundary(c, 2)
    col = B.matrix[:, 0].toarray().ravel()
    assert col[c.index((1, 2))] == 1
    assert col[c.index((0, 2))] == -1
    assert col[c.index((0, 1))] == 1


def test_boundary_invalid_dimension():
    c = single_triangle()
    with pytest.raises(InvalidDimension):
        build_boundary(c, 3)
    with pytest.raises(InvalidDimension):
        build_boundary(c, 0)


def test_tetrahedron_boundary_composition_is_zero():
    c = shapes.tetrahedron()
    d1, d2 = build_boundary(c, 1), build_boundary(c, 2)
    assert d2.shape == (6, 4)
    assert abs(d1.matrix @ d2.matrix).sum() == 0


def test_octahedron_columns_have_three_entries():
    c = shapes.octahedron()
    B = build_boundary(c, 2)
    assert B.shape == (12, 8)
    assert np.all(np.diff(B.matrix.indptr) == 3)
    assert set(np.unique(B.matrix.data)) == {-1, 1}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_solid_tetrahedron_columns(k):
    c = shapes.tetrahedron(solid=True)
    B = build_boundary(c, k)
    assert np.all(np.diff(B.matrix.indptr) == k + 1)
    if k > 1:
        assert abs(build_boundary(c, k - 1).matrix @ B.matrix).sum() == 0


def test_simplex_measure_examples():
    assert simplex_measure(single_triangle(), 2, 0) == pytest.approx(0.5)
    eq = SimplicialComplex([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]], [(0, 1, 2)])
    assert simplex_measure(eq, 2, 0) == pytest.approx(math.sqrt(3) / 4, rel=1e-12)
    flat = SimplicialComplex([[0, 0], [1, 1], [2, 2]], [(0, 1, 2)])
    assert simplex_measure(flat, 2, 0) == 0.0
    assert simplex_measure(eq, 1, 0) == pytest.approx(1.0)
    assert simplex_measure(eq, 0, 2) == 1.0


def test_solid_tetrahedron_volume():
    c = shapes.tetrahedron(regular=False, solid=True)
    assert simplex_measure(c, 3, 0) == pytest.approx(1 / 6)


def test_weight_validation():
    w = WeightVector(2, [0.5, 0.0, 0.25])
    with pytest.raises(ZeroAreaSimplex) as info:
        w.validated()
    assert info.value.indices == [1]
    assert list(w.validated(clamp=0.1).values) == [0.5, 0.1, 0.25]
    assert WeightVector(2, [1.0, 2.0]).validated().max == 2.0


def test_boundary_of_examples():
    c = single_triangle()
    b = boundary_of(c, ChainVector(2, {0: 1.0}))
    assert b.coefficients == {c.index((0, 1)): 1.0, c.index((0, 2)): -1.0, c.index((1, 2)): 1.0}
    assert boundary_of(c, ChainVector.zero(2)).is_zero()


def test_octahedron_fundamental_cycle():
    # orientation signs from the outward normal, independent of the boundary code
    c = shapes.octahedron()
    coords = c.vertex_coordinates
    signs = {f: float(np.sign(np.linalg.det(coords[list(s)]))) for f, s in enumerate(c.simplices(2))}
    assert all(v != 0 for v in signs.values())
    assert boundary_of(c, ChainVector(2, signs)).is_zero()


def test_is_cycle_examples():
    c = shapes.grid_disk(1, 3)
    tri = boundary_of(c, ChainVector(2, {0: 1.0}))
    assert is_cycle(c, tri)
    assert not is_cycle(c, ChainVector(1, {0: 1.0}))
    # triangles 0 and 5 share no vertex in a 1x3 strip
    assert not set(c.simplices(2)[0]) & set(c.simplices(2)[5])
    two = tri + boundary_of(c, ChainVector(2, {5: 1.0}))
    assert is_cycle(c, two)


def test_cycle_difference_examples():
    c = shapes.square_annulus()
    z = loops_chain(c, shapes.ANNULUS_INNER)
    w = loops_chain(c, shapes.ANNULUS_OUTER)
    assert cycle_difference(z, z).is_zero()
    assert cycle_difference(z, ChainVector.zero(1)) == z
    d = cycle_difference(z, w)
    boundary_edges = {c.index(tuple(sorted((a, b))))
                      for loop in (shapes.ANNULUS_INNER, shapes.ANNULUS_OUTER)
                      for a, b in zip(loop, loop[1:] + loop[:1])}
    assert set(d.coefficients) == boundary_edges
    assert set(abs(v) for v in d.coefficients.values()) == {1.0}
    with pytest.raises(DimensionMismatch):
        cycle_difference(z, ChainVector.zero(2))


def test_chain_area_examples():
    w = WeightVector(2, [0.5, 0.25])
    assert chain_area(ChainVector.zero(2), w) == 0
    assert chain_area(ChainVector(2, {0: -1.0}), w) == 0.5
    assert chain_area(ChainVector(2, {0: 1.0, 1: -2.0}), w) == 1.0


def test_support_components_examples():
    c = shapes.grid_disk(1, 3)
    assert [len(g) for g in support_components(c, ChainVector(2, {0: 1.0}))] == [1]
    # triangles 0 and 1 share the diagonal of the first square
    assert [len(g) for g in support_components(c, ChainVector(2, {0: 1.0, 1: -1.0}))] == [2]
    assert len(support_components(c, ChainVector(2, {0: 1.0, 5: 1.0}))) == 2
    # threshold removes small coefficients from the support
    assert len(support_components(c, ChainVector(2, {0: 1.0, 5: 1e-9}), threshold=1e-7)) == 1


def test_complex_components():
    two = SimplicialComplex([[0, 0, 0], [1, 0, 0], [0, 1, 0], [5, 0, 0], [6, 0, 0], [5, 1, 0]],
                            [(0, 1, 2), (3, 4, 5)])
    assert complex_components(two) == 2
    assert complex_components(shapes.octahedron()) == 1


def test_chain_from_simplices_uses_parity():
    c = single_triangle()
    ch = ChainVector.from_simplices(c, {(2, 1, 0): 1.0})
    assert ch.coefficients == {0: -1.0}


def test_chain_canonical_form():
    ch = ChainVector(1, {0: 1e-14, 1: 2.0, 2: 0.0})
    assert ch.coefficients == {1: 2.0}
    assert (ch - ch).is_zero()


def _rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    return q * np.sign(np.diag(r))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_measure_rigid_motion_invariance(seed, k):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(4, 3))
    c = SimplicialComplex(pts, [(0, 1, 2, 3)])
    moved = SimplicialComplex(pts @ _rotation(rng).T + rng.normal(size=3), [(0, 1, 2, 3)])
    a = simplex_measures(c, k).values
    b = simplex_measures(moved, k).values
    np.testing.assert_allclose(b, a, rtol=1e-9, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0), st.integers(1, 3))
def test_measure_scaling(seed, s, k):
    pts = np.random.default_rng(seed).normal(size=(4, 3))
    a = simplex_measures(SimplicialComplex(pts, [(0, 1, 2, 3)]), k).values
    b = simplex_measures(SimplicialComplex(s * pts, [(0, 1, 2, 3)]), k).values
    np.testing.assert_allclose(b, s ** k * a, rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.sampled_from(["solid", "torus", "mobius"]))
def test_boundary_of_boundary_is_zero(coeffs, which):
    if which == "solid":
        c = shapes.tetrahedron(solid=True)
        chain = ChainVector(3, {0: float(coeffs[0])})
    else:
        c = shapes.torus() if which == "torus" else shapes.mobius_strip()
        chain = ChainVector(2, {i * 2: float(v) for i, v in enumerate(coeffs)})
    assert boundary_of(c, boundary_of(c, chain)).is_zero()
    for j in range(2, c.dimension + 1):
        assert abs(c.boundary(j - 1).matrix @ c.boundary(j).matrix).sum() == 0


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(0, 17), st.floats(-10, 10, allow_nan=False), max_size=18),
       st.floats(-5, 5, allow_nan=False))
def test_chain_area_homogeneous(coeffs, s):
    w = WeightVector(2, np.linspace(0.1, 2.0, 18))
    ch = ChainVector(2, coeffs)
    assert chain_area(ch * s, w) == pytest.approx(abs(s) * chain_area(ch, w), rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 17)))
def test_support_components_partition(support):
    c = shapes.torus()
    ch = ChainVector(2, {i: 1.0 for i in support})
    comps = support_components(c, ch)
    union = set().union(*comps) if comps else set()
    assert union == support
    assert sum(len(g) for g in comps) == len(support)


def test_coherent_orientation():
    for c in (shapes.octahedron(), shapes.torus(5, 4), shapes.icosphere(2)):
        signs = shapes.coherent_orientation(c)
        assert boundary_of(c, ChainVector(2, dict(enumerate(signs.astype(float))))).is_zero()
    assert shapes.coherent_orientation(shapes.mobius_strip()) is None
    # a single face's outline is its three edges
    c = shapes.octahedron()
    assert len(shapes.region_boundary(c, [0]).coefficients) == 3
    # the star of a vertex on a closed surface is bounded by its link
    star = [f for f, s in enumerate(c.simplices(2)) if 4 in s]
    assert len(shapes.region_boundary(c, star).coefficients) == 4
