import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricbundle.polyhedra import (
    HPolytope,
    UnboundedError,
    feasible,
    is_full_dimensional,
    lattice_points,
    polytope_dim,
    vertex_edges,
    vertices_2d,
)

BOX = [((1, 0), 3), ((-1, 0), 3), ((0, 1), 3), ((0, -1), 3)]


def brute_points(P, radius=4):
    return sorted(p for p in itertools.product(range(-radius, radius + 1), repeat=P.dim) if P.contains(p))


def test_unit_triangle():
    # <x,(-1,-1)> <= 1, <x,(1,0)> <= 0, <x,(0,1)> <= 0
    P = HPolytope(2, (((-1, -1), 1), ((1, 0), 0), ((0, 1), 0)))
    assert lattice_points(P) == [(-1, 0), (0, -1), (0, 0)]
    assert polytope_dim(P) == 2
    assert sorted(vertex_edges(P, (0, 0))) == [(-1, 0), (0, -1)]
    assert vertex_edges(P, (1, 1)) is None


def test_point_segment_empty():
    point = HPolytope(2, (((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), 0)))
    assert lattice_points(point) == [(0, 0)] and polytope_dim(point) == 0
    seg = HPolytope(2, (((1, 0), 1), ((-1, 0), 0), ((0, 1), 0), ((0, -1), 0)))
    assert polytope_dim(seg) == 1 and not is_full_dimensional(seg)
    empty = HPolytope(2, (((1, 0), -1), ((-1, 0), 0), ((0, 1), 0), ((0, -1), 0)))
    assert polytope_dim(empty) == -1 and lattice_points(empty) == []


def test_rational_vertices_and_strictness():
    # 2x <= 1 and -2x <= 0: no integer point besides x = 0 but full-dimensional
    P = HPolytope(1, (((2,), 1), ((-2,), 0)))
    assert lattice_points(P) == [(0,)]
    assert polytope_dim(P) == 1
    assert not feasible([((1,), 0, True), ((-1,), 0, False)], 1)
    assert feasible([((1,), 0, False), ((-1,), 0, False)], 1)


def test_unbounded_raises():
    with pytest.raises(UnboundedError):
        lattice_points(HPolytope(2, (((1, 0), 0), ((0, 1), 0))))


def test_vertices_2d_order():
    P = HPolytope(2, tuple(BOX))
    vs = vertices_2d(P)
    assert set(vs) == {(3, 3), (3, -3), (-3, 3), (-3, -3)}


ineq = st.tuples(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-4, 4))


@settings(max_examples=80, deadline=None)
@given(st.lists(ineq, max_size=4))
def test_lattice_points_match_brute_force(extra):
    P = HPolytope(2, tuple(BOX + extra))
    assert lattice_points(P) == brute_points(P)


@settings(max_examples=80, deadline=None)
@given(st.lists(ineq, max_size=4))
def test_dimension_matches_lattice_hull_when_scaled(extra):
    # scaling by 6 makes every vertex integral (coefficients are small), so the
    # affine hull of lattice points is the affine hull of the polytope
    P = HPolytope(2, tuple(BOX + extra))
    Q = HPolytope(2, tuple((n, 6 * b) for n, b in P.inequalities))
    pts = brute_points(Q, radius=18) if polytope_dim(P) >= 0 else []
    if not pts:
        assert polytope_dim(P) == -1
        return
    from toricbundle.linalg import rank

    base = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    hull = rank(diffs, 2) if diffs else 0
    assert polytope_dim(P) == hull
