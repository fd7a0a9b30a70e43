import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse.csgraph import dijkstra

from minhomology import shapes
from minhomology.complex import (ChainVector, SimplicialComplex, WeightVector, chain_area, simplex_measures,
                                 support_components)
from minhomology.errors import DimensionMismatch, NotHomologous, ZeroAreaSimplex
from minhomology.solvers import (SolverConfig, area_bounds, check_homologous, norm_sandwich_check, solve,
                                 solve_count_min, solve_l1_exact, solve_l1_omp, solve_l2)

from _support import assert_feasible, loops_chain, random_boundary, setup

SQRT3 = math.sqrt(3.0)
WEIGHTED = [solve_l1_exact, solve_l1_omp, solve_l2]


def test_tetrahedron_single_face():
    c = shapes.tetrahedron()
    B, w = setup(c)
    z = loops_chain(c, [0, 1, 2])
    r = solve_l1_exact(B, w, z)
    assert r.area == pytest.approx(SQRT3 / 4, rel=1e-12)
    assert r.chain.coefficients == {c.index((0, 1, 2)): 1.0}
    assert_feasible(r, B, z)
    count = solve_count_min(B, z)
    assert count.area == pytest.approx(1.0)
    assert count.chain.coefficients == {c.index((0, 1, 2)): 1.0}


@pytest.mark.parametrize("fn", WEIGHTED)
def test_zero_chain(fn):
    c = shapes.tetrahedron()
    B, w = setup(c)
    r = fn(B, w, ChainVector.zero(1))
    assert r.chain.is_zero() and r.area == 0.0 and r.iterations == 0


def test_zero_chain_count():
    c = shapes.tetrahedron()
    B, w = setup(c)
    r = solve_count_min(B, ChainVector.zero(1))
    assert r.area == 0.0
    b = area_bounds(r, w)
    assert (b.lower, b.upper) == (0.0, 0.0)


def _hemispheres(c):
    north = {f for f, s in enumerate(c.simplices(2)) if 4 in s}
    south = {f for f, s in enumerate(c.simplices(2)) if 5 in s}
    return north, south


def test_octahedron_equator_exact_and_count():
    c = shapes.octahedron()
    B, w = setup(c)
    z = loops_chain(c, shapes.OCTAHEDRON_EQUATOR)
    r = solve_l1_exact(B, w, z)
    assert r.area == pytest.approx(SQRT3, rel=1e-12)
    assert set(r.chain.coefficients) in _hemispheres(c)
    count = solve_count_min(B, z)
    assert count.area == pytest.approx(4.0)
    assert set(count.chain.coefficients) in _hemispheres(c)


def test_octahedron_equator_l2_spreads_evenly():
    c = shapes.octahedron()
    B, w = setup(c)
    z = loops_chain(c, shapes.OCTAHEDRON_EQUATOR)
    r = solve_l2(B, w, z)
    coeffs = r.chain.to_dense(8)
    np.testing.assert_allclose(np.abs(coeffs), 0.5, rtol=1e-9)
    assert r.area == pytest.approx(SQRT3, rel=1e-9)
    assert r.metadata["quadratic"] == pytest.approx(8 * 0.25 * SQRT3 / 4, rel=1e-9)
    assert solve_l1_exact(B, w, z).area <= r.area + 1e-9
    assert norm_sandwich_check(r.chain, 8)


@pytest.mark.parametrize("fn", WEIGHTED + [lambda B, w, z: solve_count_min(B, z)])
def test_annulus_unique_chain(fn):
    c = shapes.square_annulus()
    B, w = setup(c)
    z = loops_chain(c, shapes.ANNULUS_INNER) - loops_chain(c, shapes.ANNULUS_OUTER)
    r = fn(B, w, z)
    np.testing.assert_allclose(np.abs(r.chain.to_dense(8)), 1.0, rtol=1e-9)
    # annulus between squares of side 2 and 4
    assert chain_area(r.chain, w) == pytest.approx(12.0, rel=1e-9)
    assert_feasible(r, B, z)


def test_omp_picks_small_face_in_one_iteration():
    coords = [[0, 0, 0], [0.3, 0, 0], [0, 0.3, 0], [0, 0, 1]]
    c = SimplicialComplex(coords, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    B, w = setup(c)
    small = c.index((0, 1, 2))
    assert w.values[small] < min(np.delete(w.values, small))
    z = loops_chain(c, [0, 1, 2])
    r = solve_l1_omp(B, w, z)
    assert r.iterations == 1
    assert list(r.chain.coefficients) == [small]
    assert r.chain.coefficients[small] == pytest.approx(1.0, rel=1e-12)
    assert r.area == pytest.approx(solve_l1_exact(B, w, z).area, rel=1e-12)


def test_bounds_uniform_weights_is_a_point():
    c = shapes.octahedron()
    B, w = setup(c)
    r = solve("count", B, w, loops_chain(c, shapes.OCTAHEDRON_EQUATOR))
    assert r.bounds.lower == pytest.approx(r.bounds.upper, rel=1e-15)
    assert r.bounds.lower == pytest.approx(4 * SQRT3 / 4)
    assert r.bounds.count == 4


def test_bounds_contain_exact_area():
    base = shapes.tetrahedron().vertex_coordinates
    coords = np.array(base)
    coords[3] *= 1.08
    c = SimplicialComplex(coords, shapes.tetrahedron().simplices(2))
    B, w = setup(c)
    assert 0.4 <= w.min and w.max <= 0.5 and w.min < w.max
    z = loops_chain(c, [0, 1, 2])
    count = solve_count_min(B, z)
    assert count.area == pytest.approx(1.0)
    b = area_bounds(count, w)
    exact = solve_l1_exact(B, w, z).area
    assert b.lower <= exact <= b.upper
    assert (b.lower, b.upper) == (pytest.approx(w.min), pytest.approx(w.max))


def test_norm_sandwich_examples():
    assert norm_sandwich_check(ChainVector.zero(2), 5)
    assert norm_sandwich_check(ChainVector(2, {3: 1.0}), 5)
    assert norm_sandwich_check(ChainVector(2, {i: 1.0 for i in range(7)}), 7)
    assert not norm_sandwich_check(ChainVector(2, {i: 1.0 for i in range(7)}), 6)


def test_check_homologous_examples():
    c = shapes.tetrahedron()
    assert check_homologous(c.boundary(2), ChainVector.zero(1))
    assert check_homologous(c.boundary(2), loops_chain(c, [0, 1, 2]))
    t = shapes.torus()
    assert not check_homologous(t.boundary(2), loops_chain(t, shapes.torus_meridian(3, 3)))
    assert check_homologous(t.boundary(2), loops_chain(t, shapes.torus_meridian(3, 3, 0))
                            - loops_chain(t, shapes.torus_meridian(3, 3, 2)))


@pytest.mark.parametrize("method", ["lp", "omp", "l2", "count"])
def test_torus_meridian_not_homologous(method):
    t = shapes.torus()
    B, w = setup(t)
    with pytest.raises(NotHomologous):
        solve(method, B, w, loops_chain(t, shapes.torus_meridian(3, 3)))


def test_degenerate_face_rejected_or_clamped():
    coords = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]]
    c = SimplicialComplex(coords, [(0, 1, 2), (0, 1, 3), (1, 2, 3)])
    B, w = setup(c)
    z = loops_chain(c, [0, 1, 3])
    with pytest.raises(ZeroAreaSimplex):
        solve_l1_exact(B, w, z)
    r = solve_l1_exact(B, w, z, SolverConfig(area_clamp=1e-3))
    assert r.area == pytest.approx(0.5)


def test_dimension_mismatch():
    c = shapes.tetrahedron()
    B, w = setup(c)
    with pytest.raises(DimensionMismatch):
        solve_l1_exact(B, w, ChainVector(2, {0: 1.0}))
    with pytest.raises(DimensionMismatch):
        solve_l2(B, WeightVector(2, [1.0, 1.0]), loops_chain(c, [0, 1, 2]))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(residual_tol=0)
    with pytest.raises(ValueError):
        SolverConfig(max_support=0)
    with pytest.raises(ValueError):
        solve("simplex", *setup(shapes.tetrahedron()), ChainVector.zero(1))


def test_mobius_fractional_instance_matches_all_solvers():
    m = shapes.mobius_strip()
    B, w = setup(m)
    z = loops_chain(m, shapes.mobius_boundary_loop()) - 2 * loops_chain(m, shapes.mobius_core_loop())
    exact = solve_l1_exact(B, w, z)
    for r in (exact, solve_l1_omp(B, w, z), solve_l2(B, w, z)):
        assert_feasible(r, B, z)
        assert exact.area <= r.area + 1e-9


def test_path_graph_shortest_path():
    lengths = [1.0, 2.5, 0.5, 3.0]
    c = shapes.path_graph(lengths)
    B, w = setup(c, dim=1)
    z = ChainVector(0, {4: 1.0, 0: -1.0})
    r = solve_l1_exact(B, w, z)
    assert r.area == pytest.approx(sum(lengths))
    assert_feasible(r, B, z)


def test_graph_bounding_chain_is_shortest_path():
    rng = np.random.default_rng(5)
    c = shapes.perturbed(shapes.icosphere(2), rng, 0.2)
    g = SimplicialComplex(c.vertex_coordinates, c.simplices(1))
    B, w = setup(g, dim=1)
    n = g.n_vertices
    edges = np.array(g.simplices(1))
    import scipy.sparse as sp
    adj = sp.coo_matrix((w.values, (edges[:, 0], edges[:, 1])), shape=(n, n))
    dist = dijkstra(adj, directed=False, indices=[0])[0]
    for target in (7, 21, n - 1):
        z = ChainVector(0, {target: 1.0, 0: -1.0})
        r = solve_l1_exact(B, w, z)
        assert r.area == pytest.approx(dist[target], rel=1e-9)


def test_scale_equivariance():
    rng = np.random.default_rng(11)
    c = shapes.perturbed(shapes.icosphere(2), rng, 0.15)
    z = random_boundary(c, rng, 12) - random_boundary(c, rng, 9)
    B, w = setup(c)
    s = 3.5
    big = SimplicialComplex(s * c.vertex_coordinates, c.simplices(2))
    r1 = solve_l1_exact(B, w, z)
    r2 = solve_l1_exact(big.boundary(2), simplex_measures(big, 2), z)
    assert r2.area == pytest.approx(s * s * r1.area, rel=1e-9)
    np.testing.assert_allclose(r2.chain.to_dense(B.cols), r1.chain.to_dense(B.cols), atol=1e-9)


def test_fixture_components_reported():
    c = shapes.icosphere(2)
    B, w = setup(c)
    rng = np.random.default_rng(0)
    z = random_boundary(c, rng, 5)
    r = solve_l1_exact(B, w, z)
    assert len(support_components(c, r.chain, 1e-7)) >= 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["ico", "torus"]))
def test_solver_properties(seed, which):
    rng = np.random.default_rng(seed)
    if which == "ico":
        c = shapes.perturbed(shapes.icosphere(2), rng, 0.2)
    else:
        c = shapes.torus(5, 4)
    B, w = setup(c)
    z = random_boundary(c, rng, int(rng.integers(1, 25))) - random_boundary(c, rng, int(rng.integers(1, 25)))
    if which == "torus":
        z = z + loops_chain(c, shapes.torus_meridian(5, 4, 0)) - loops_chain(c, shapes.torus_meridian(5, 4, 3))
    exact = solve_l1_exact(B, w, z)
    assert_feasible(exact, B, z)
    neg = solve_l1_exact(B, w, -z)
    assert neg.area == pytest.approx(exact.area, rel=1e-9, abs=1e-12)
    for r in (solve_l1_omp(B, w, z), solve_l2(B, w, z)):
        assert_feasible(r, B, z)
        assert exact.area <= r.area + 1e-9
        assert norm_sandwich_check(r.chain, B.cols)
    count = solve("count", B, w, z)
    assert_feasible(count, B, z)
    assert count.bounds.lower - 1e-9 <= exact.area <= count.bounds.upper + 1e-9
    assert norm_sandwich_check(exact.chain, B.cols)
