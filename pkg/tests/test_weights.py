import math

import numpy as np

from qdisc.weights import (
    completeness_polytope,
    min_support_vertex,
    nonneg_solutions,
)


def equatorial(longitudes):
    return [np.array([math.cos(phi), math.sin(phi), 0.0]) for phi in longitudes]


def test_trine_weights_unique():
    poly = completeness_polytope(equatorial([0, 2 * math.pi / 3,
                                             4 * math.pi / 3]))
    assert poly.feasible
    assert poly.dimension == 0
    assert len(poly.vertices) == 1
    np.testing.assert_allclose(poly.vertices[0], [2 / 3] * 3, atol=1e-12)


def test_half_circle_boundary_weights():
    # longitudes 0, 90, 180 degrees: the unique solution drops the middle one
    poly = completeness_polytope(equatorial([0.0, math.pi / 2, math.pi]))
    assert poly.feasible
    np.testing.assert_allclose(poly.vertices[0], [1.0, 0.0, 1.0], atol=1e-12)


def test_open_semicircle_infeasible():
    poly = completeness_polytope(equatorial([0.0, math.pi / 6, math.pi / 3]))
    assert not poly.feasible
    assert poly.interior_point is None


def test_four_equatorial_line_segment():
    poly = completeness_polytope(equatorial([0, math.pi / 2, math.pi,
                                             3 * math.pi / 2]))
    assert poly.feasible
    assert poly.dimension == 1
    verts = {tuple(np.round(v, 9)) for v in poly.vertices}
    assert verts == {(1.0, 0.0, 1.0, 0.0), (0.0, 1.0, 0.0, 1.0)}
    interior = poly.interior_point
    assert np.all(interior > 0.1)
    a, b = poly.matrix, poly.rhs
    assert np.linalg.norm(a @ interior - b) <= 1e-9


def test_min_support_vertex():
    poly = completeness_polytope(equatorial([0, math.pi / 2, math.pi,
                                             3 * math.pi / 2]))
    v = min_support_vertex(poly)
    assert np.count_nonzero(v > 1e-12) == 2


def test_formability_matches_semicircle_gap():
    # feasible iff no open semicircle contains every longitude,
    # i.e. the largest circular gap is <= pi
    rng = np.random.default_rng(16)
    for _ in range(200):
        n = int(rng.integers(3, 7))
        phis = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
        gaps = np.diff(np.concatenate([phis, [phis[0] + 2 * math.pi]]))
        if abs(gaps.max() - math.pi) < 1e-6:
            continue  # skip the knife edge
        poly = completeness_polytope(equatorial(phis))
        assert poly.feasible == (gaps.max() <= math.pi)


def test_tetrahedron_weights():
    v = 1 / math.sqrt(3)
    dirs = [np.array(x) for x in
            ([v, v, v], [v, -v, -v], [-v, v, -v], [-v, -v, v])]
    poly = completeness_polytope(dirs)
    assert poly.feasible
    assert poly.dimension == 0
    np.testing.assert_allclose(poly.vertices[0], [0.5] * 4, atol=1e-12)


def test_generic_nonneg_system():
    a = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, 0.0]])
    b = np.array([2.0, 0.0])
    poly = nonneg_solutions(a, b)
    assert poly.feasible
    for v in poly.vertices:
        assert v.min() >= -1e-12
        assert np.linalg.norm(a @ v - b) <= 1e-9
    assert poly.dimension == 1
