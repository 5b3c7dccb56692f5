import itertools
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricbundle.linalg import (
    DimensionError,
    complement_in,
    full_space,
    intersect,
    member,
    rref,
    sum_spaces,
    sym_basis,
    sym_embed,
    sym_multiply,
    zero_space,
)


def vec(*xs):
    return tuple(Fr(x) for x in xs)


def test_rref_scales_to_identity():
    assert rref([(2, 0), (0, 3)]).rows == (vec(1, 0), vec(0, 1))


def test_rref_collapses_dependent_rows():
    assert rref([(1, 1), (2, 2)]).rows == (vec(1, 1),)


def test_rref_moment_curve_rows():
    # R2 - R1 = (0, 1, 5); R1 - 2 R2 = (1, 0, -6)
    V = rref([(1, 2, 4), (1, 3, 9)])
    assert V.rows == (vec(1, 0, -6), vec(0, 1, 5))
    assert V.pivots == (0, 1)


def test_rref_empty_needs_dimension():
    assert rref([], 3).dim == 0
    with pytest.raises(DimensionError):
        rref([])


def test_intersect_examples():
    assert intersect(rref([(1, 0)]), rref([(0, 1)])).is_zero()
    V = rref([(1, 2)])
    assert intersect(V, V) == V
    a = rref([(1, 0, 0), (0, 1, 0)])
    b = rref([(0, 1, 0), (0, 0, 1)])
    assert intersect(a, b) == rref([(0, 1, 0)])


def test_intersect_dimension_mismatch():
    with pytest.raises(DimensionError):
        intersect(full_space(2), full_space(3))


def test_complement_examples():
    assert complement_in(full_space(2), zero_space(2)) == [vec(1, 0), vec(0, 1)]
    V = rref([(1, 0), (0, 1)])
    assert complement_in(V, rref([(1, 0)]), preferred=[(1, 1)]) == [vec(1, 1)]
    # span of the three moment-curve points is Q^3; greedy over e1, e2, e3:
    # det[(1,2,4),(1,0,0),(0,1,0)] = 4 != 0, so e1 and e2 are taken
    W = rref([(1, 2, 4), (1, 3, 9), (1, 5, 25)])
    assert complement_in(W, rref([(1, 2, 4)])) == [vec(1, 0, 0), vec(0, 1, 0)]


def test_complement_requires_containment():
    with pytest.raises(ValueError):
        complement_in(rref([(1, 0)]), rref([(0, 1)]))


def _expand(vectors):
    """Brute-force product of linear forms as {exponent tuple: coefficient}."""
    r = len(vectors[0])
    poly = {}
    for choice in itertools.product(range(r), repeat=len(vectors)):
        c = Fr(1)
        for v, i in zip(vectors, choice):
            c *= v[i]
        e = [0] * r
        for i in choice:
            e[i] += 1
        poly[tuple(e)] = poly.get(tuple(e), 0) + c
    return poly


def test_sym_embed_examples():
    b = sym_basis(2, 2)
    assert b.monomials == ((2, 0), (1, 1), (0, 2))
    assert sym_embed([(1, 0), (1, 0)]) == vec(1, 0, 0)
    assert sym_embed([(1, 0), (0, 1)]) == vec(0, 1, 0)
    # (x + y)(x + z) = x^2 + xy + xz + yz
    b3 = sym_basis(3, 2)
    got = sym_embed([(1, 1, 0), (1, 0, 1)])
    want = _expand([vec(1, 1, 0), vec(1, 0, 1)])
    assert got == tuple(want.get(m, 0) for m in b3.monomials)
    assert got == vec(1, 1, 1, 0, 1, 0)


def test_sym_basis_size():
    from math import comb

    for r in range(1, 5):
        for k in range(0, 5):
            assert sym_basis(r, k).dim == comb(r + k - 1, k)


small = st.integers(-3, 3)


def vectors(n):
    return st.lists(st.tuples(*[small] * n), min_size=0, max_size=4)


@settings(max_examples=60, deadline=None)
@given(vectors(3), vectors(3))
def test_dimension_formula(a, b):
    V, W = rref(a, 3), rref(b, 3)
    assert intersect(V, W).dim + sum_spaces(V, W).dim == V.dim + W.dim


@settings(max_examples=60, deadline=None)
@given(vectors(3), st.randoms(use_true_random=False), st.integers(1, 5))
def test_rref_canonical(rows, rnd, scale):
    V = rref(rows, 3)
    assert rref(V.rows, 3) == V
    shuffled = [tuple(scale * x for x in r) for r in rows]
    rnd.shuffle(shuffled)
    assert rref(shuffled, 3) == V


@settings(max_examples=60, deadline=None)
@given(vectors(3), st.tuples(small, small, small))
def test_member_matches_rref(rows, v):
    V = rref(rows, 3)
    assert member(v, V) == (rref(list(rows) + [v], 3) == V)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=3), st.randoms(use_true_random=False),
       st.integers(-3, 3))
def test_sym_embed_symmetric_and_multilinear(vs, rnd, lam):
    base = sym_embed(vs)
    perm = list(vs)
    rnd.shuffle(perm)
    assert sym_embed(perm) == base
    scaled = [tuple(lam * x for x in vs[0])] + list(vs[1:])
    assert sym_embed(scaled) == tuple(lam * x for x in base)
    want = _expand([tuple(Fr(x) for x in v) for v in vs])
    assert base == tuple(want.get(m, 0) for m in sym_basis(3, len(vs)).monomials)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=2, max_size=4))
def test_sym_multiply_is_product(vs):
    a, b = vs[:1], vs[1:]
    assert sym_multiply(sym_embed(a), len(a), sym_embed(b), len(b), 2) == sym_embed(vs)
