"""Exact linear algebra over the rationals.

Subspaces of ``Q^n`` are stored by their reduced row-echelon basis, so two
subspaces are equal exactly when their matrices are equal.  Everything here is
immutable and uses :class:`fractions.Fraction`; there is no floating point.

Symmetric powers are coordinatised by monomials: the symmetric product
``v_1 ... v_k`` of vectors in ``Q^r`` is the literal product of the linear
forms ``sum_i v_i[j] x_j``, expanded in the monomial basis of degree ``k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


class DimensionError(ValueError):
    """Raised when vectors or subspaces live in different ambient spaces."""


def to_vector(values: Iterable) -> Vector:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """In-place Gauss-Jordan elimination; returns the nonzero rows."""
    pivot_row = 0
    nrows = len(rows)
    for col in range(ncols):
        if pivot_row == nrows:
            break
        sel = None
        for i in range(pivot_row, nrows):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        prow = rows[pivot_row]
        inv = 1 / prow[col]
        if inv != 1:
            prow[:] = [x * inv for x in prow]
        for i in range(nrows):
            if i != pivot_row:
                f = rows[i][col]
                if f != 0:
                    r = rows[i]
                    rows[i] = [a - f * b for a, b in zip(r, prow)]
        pivot_row += 1
    return rows[:pivot_row]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of ``Q^ambient_dim`` in canonical RREF form."""

    ambient_dim: int
    rows: tuple = ()
    pivots: tuple = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.ambient_dim

    def reduce(self, v: Sequence) -> list[Fraction]:
        """Remainder of ``v`` after subtracting its component along the RREF rows."""
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in Q^{self.ambient_dim}")
        w = list(v)
        for p, row in zip(self.pivots, self.rows):
            c = w[p]
            if c != 0:
                w = [a - c * b for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(other.contains(r) for r in self.rows)

    def coordinates(self, v: Sequence) -> list[Fraction]:
        """Coefficients of ``v`` in the RREF basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return [Fraction(v[p]) for p in self.pivots]

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"<{body}>" if body else "<0>"


def _check_same(V: Subspace, W: Subspace) -> None:
    if V.ambient_dim != W.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {V.ambient_dim} != {W.ambient_dim}")


def rref(rows: Iterable[Sequence], ambient_dim: int | None = None) -> Subspace:
    """Canonical row space of ``rows``.  An empty input needs ``ambient_dim``."""
    mat = [list(to_vector(r)) for r in rows]
    if ambient_dim is None:
        if not mat:
            raise DimensionError("ambient_dim is required for an empty matrix")
        ambient_dim = len(mat[0])
    for r in mat:
        if len(r) != ambient_dim:
            raise DimensionError("inconsistent row lengths")
    red = _rref_rows(mat, ambient_dim)
    pivots = []
    for r in red:
        for j, x in enumerate(r):
            if x != 0:
                pivots.append(j)
                break
    return Subspace(ambient_dim, tuple(tuple(r) for r in red), tuple(pivots))


span = rref


def zero_space(n: int) -> Subspace:
    return Subspace(n, (), ())


def full_space(n: int) -> Subspace:
    return rref(standard_basis(n), n)


def standard_basis(n: int) -> list[Vector]:
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def rank(vectors: Sequence[Sequence], ambient_dim: int | None = None) -> int:
    if not vectors:
        return 0
    return rref(vectors, ambient_dim).dim


def null_space(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : r . x = 0 for every row r}``, one vector per free column."""
    S = rref(rows, ncols) if rows else zero_space(ncols)
    free = [j for j in range(ncols) if j not in S.pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for p, row in zip(S.pivots, S.rows):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def orthogonal_complement(V: Subspace) -> Subspace:
    return rref(null_space(V.rows, V.ambient_dim), V.ambient_dim)


def intersect(V: Subspace, W: Subspace) -> Subspace:
    _check_same(V, W)
    if V.is_zero() or W.is_zero():
        return zero_space(V.ambient_dim)
    if V.is_full():
        return W
    if W.is_full():
        return V
    n = V.ambient_dim
    perp = list(null_space(V.rows, n)) + list(null_space(W.rows, n))
    return rref(null_space(perp, n), n)


def intersect_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    out = full_space(ambient_dim)
    for S in spaces:
        out = intersect(out, S)
        if out.is_zero():
            break
    return out


def sum_spaces(V: Subspace, W: Subspace) -> Subspace:
    _check_same(V, W)
    return rref(list(V.rows) + list(W.rows), V.ambient_dim)


def span_of_spaces(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    rows = [r for S in spaces for r in S.rows]
    return rref(rows, ambient_dim)


def member(v: Sequence, V: Subspace) -> bool:
    return V.contains(v)


class Echelon:
    """Growing span used for greedy basis extension; keeps an RREF internally."""

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        self.space = zero_space(ambient_dim)
        for v in vectors:
            self.add(v)

    def contains(self, v: Sequence) -> bool:
        return self.space.contains(v)

    def add(self, v: Sequence) -> bool:
        """Add ``v``; returns False (and does nothing) if it is already spanned."""
        if self.space.contains(v):
            return False
        self.space = rref(list(self.space.rows) + [v], self.ambient_dim)
        return True

    @property
    def dim(self) -> int:
        return self.space.dim


def complement_in(V: Subspace, G: Subspace, preferred: Sequence[Sequence] = ()) -> list[Vector]:
    """Vectors extending a basis of ``G`` to a basis of ``V``.

    Candidates from ``preferred`` that lie in ``V`` are taken greedily in the
    given order; the remaining directions come from the RREF rows of ``V`` in
    order of increasing pivot column.
    """
    _check_same(V, G)
    if not G.issubspace(V):
        raise ValueError("G is not contained in V")
    ech = Echelon(V.ambient_dim, G.rows)
    chosen: list[Vector] = []
    for p in preferred:
        if ech.dim == V.dim:
            break
        p = to_vector(p)
        if len(p) != V.ambient_dim:
            raise DimensionError("preferred vector has the wrong length")
        if V.contains(p) and ech.add(p):
            chosen.append(p)
    for row in V.rows:
        if ech.dim == V.dim:
            break
        if ech.add(row):
            chosen.append(tuple(row))
    return chosen


def express_in(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients ``c`` with ``v = sum c_i basis[i]`` for a linearly independent basis."""
    n = len(v)
    m = len(basis)
    # augmented system [basis^T | v]
    rows = [[Fraction(basis[j][i]) for j in range(m)] + [Fraction(v[i])] for i in range(n)]
    coeffs = [Fraction(0)] * m
    for r in _rref_rows(rows, m + 1):
        lead = next(j for j, x in enumerate(r) if x != 0)
        if lead == m:
            raise ValueError("vector is not in the span of the basis")
        coeffs[lead] = r[m]
    check = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(n)]
    if check != [Fraction(x) for x in v]:
        raise ValueError("basis is not linearly independent")
    return coeffs


def scale_to_integers(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer vector on the ray spanned by ``v`` (``v`` nonzero)."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def proportional(v: Sequence, w: Sequence) -> bool:
    """True if ``v`` and ``w`` are nonzero multiples of each other."""
    if is_zero(v) or is_zero(w):
        return False
    return rank([v, w]) == 1


# ---------------------------------------------------------------- symmetric powers


@dataclass(frozen=True)
class SymMonomialBasis:
    """Monomials of degree ``degree`` in ``rank`` variables, in descending lex order."""

    rank: int
    degree: int
    monomials: tuple

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def index(self, exponents: tuple) -> int:
        return _monomial_index(self.rank, self.degree)[exponents]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def sym_basis(rank: int, degree: int) -> SymMonomialBasis:
    if rank < 1 or degree < 0:
        raise ValueError("need rank >= 1 and degree >= 0")
    return SymMonomialBasis(rank, degree, tuple(_compositions(degree, rank)))


@lru_cache(maxsize=None)
def _monomial_index(rank: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(sym_basis(rank, degree).monomials)}


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return out


def _as_poly(v: Sequence, rank: int, degree: int) -> dict:
    basis = sym_basis(rank, degree)
    return {m: Fraction(c) for m, c in zip(basis.monomials, v) if c != 0}


def sym_multiply(v: Sequence, deg_v: int, w: Sequence, deg_w: int, rank: int) -> Vector:
    """Product of ``v`` in ``S^deg_v`` and ``w`` in ``S^deg_w``, in ``S^(deg_v+deg_w)``."""
    prod = _poly_mul(_as_poly(v, rank, deg_v), _as_poly(w, rank, deg_w))
    basis = sym_basis(rank, deg_v + deg_w)
    return tuple(Fraction(prod.get(m, 0)) for m in basis.monomials)


def sym_embed(vectors: Sequence[Sequence], rank: int | None = None) -> Vector:
    """Coordinates of the symmetric product of ``vectors`` (all in ``Q^rank``)."""
    if not vectors:
        if rank is None:
            raise ValueError("rank is required for an empty product")
        return (Fraction(1),)
    r = len(vectors[0]) if rank is None else rank
    for v in vectors:
        if len(v) != r:
            raise DimensionError(f"expected vectors of length {r}")
    poly = {tuple([0] * r): Fraction(1)}
    for v in vectors:
        lin = {}
        for j, c in enumerate(v):
            if c != 0:
                e = [0] * r
                e[j] = 1
                lin[tuple(e)] = Fraction(c)
        poly = _poly_mul(poly, lin)
    basis = sym_basis(r, len(vectors))
    return tuple(Fraction(poly.get(m, 0)) for m in basis.monomials)


def tensor_vector(v: Sequence, w: Sequence) -> Vector:
    """Kronecker product, index ``i * len(w) + j``."""
    return tuple(Fraction(a) * b for a in v for b in w)


def tensor_space(V: Subspace, W: Subspace) -> Subspace:
    n = V.ambient_dim * W.ambient_dim
    rows = [tensor_vector(a, b) for a in V.rows for b in W.rows]
    return rref(rows, n)


def tensor_to_sym(rank: int, k: int) -> list[Vector]:
    """Image in ``S^k`` of each standard basis tensor of ``(Q^rank)^{(x)k}``."""
    basis = sym_basis(rank, k)
    out = []
    for idx in itertools.product(range(rank), repeat=k):
        e = [0] * rank
        for i in idx:
            e[i] += 1
        v = [Fraction(0)] * basis.dim
        v[basis.index(tuple(e))] = Fraction(1)
        out.append(tuple(v))
    return out


def apply_tensor_to_sym(V: Subspace, rank: int, k: int) -> Subspace:
    """Image of a subspace of ``(Q^rank)^{(x)k}`` under the multiplication map to ``S^k``."""
    images = tensor_to_sym(rank, k)
    dim = sym_basis(rank, k).dim
    rows = []
    for row in V.rows:
        img = [Fraction(0)] * dim
        for c, e in zip(row, images):
            if c != 0:
                for j, x in enumerate(e):
                    if x != 0:
                        img[j] += c * x
        rows.append(img)
    return rref(rows, dim)
