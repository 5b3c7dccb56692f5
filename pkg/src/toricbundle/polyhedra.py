"""Exact H-polytopes: Fourier-Motzkin feasibility, lattice points, dimension, edges."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import null_space, rank, scale_to_integers


class UnboundedError(ValueError):
    pass


@dataclass(frozen=True)
class HPolytope:
    """``{x in Q^dim : <x, normal> <= bound}`` for every ``(normal, bound)``."""

    dim: int
    inequalities: tuple  # tuple[tuple[tuple[int, ...], int], ...]

    def contains(self, x: Sequence) -> bool:
        return all(_dot(n, x) <= b for n, b in self.inequalities)

    def tight(self, x: Sequence) -> list[int]:
        return [i for i, (n, b) in enumerate(self.inequalities) if _dot(n, x) == b]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


# A working constraint is (coeffs, bound, strict): coeffs . x <= bound  (or < if strict).


def _normalize(coeffs, bound, strict):
    lead = next((c for c in coeffs if c != 0), None)
    if lead is None:
        return tuple(coeffs), bound, strict
    s = abs(lead)
    return tuple(c / s for c in coeffs), bound / s, strict


def _tidy(system):
    """Drop redundant parallel constraints; returns None if a constant row is violated."""
    best: dict = {}
    for coeffs, bound, strict in system:
        coeffs, bound, strict = _normalize(coeffs, bound, strict)
        if all(c == 0 for c in coeffs):
            if bound < 0 or (strict and bound == 0):
                return None
            continue
        cur = best.get(coeffs)
        if cur is None or bound < cur[0] or (bound == cur[0] and strict and not cur[1]):
            best[coeffs] = (bound, strict)
    return [(c, b, s) for c, (b, s) in best.items()]


def _eliminate(system, var):
    pos, neg, rest = [], [], []
    for row in system:
        c = row[0][var]
        (pos if c > 0 else neg if c < 0 else rest).append(row)
    out = list(rest)
    for (pc, pb, ps), (nc, nb, ns) in itertools.product(pos, neg):
        fp, fn = 1 / pc[var], 1 / -nc[var]
        coeffs = tuple(a * fp + b * fn for a, b in zip(pc, nc))
        out.append((coeffs, pb * fp + nb * fn, ps or ns))
    return _tidy(out)


def _prepare(constraints):
    return _tidy([(tuple(Fraction(c) for c in n), Fraction(b), bool(s)) for n, b, s in constraints])


def feasible(constraints, dim: int) -> bool:
    """Decide ``{x : n.x <= b (or < b when strict)}`` nonempty by Fourier-Motzkin."""
    system = _prepare(constraints)
    for var in range(dim):
        if system is None:
            return False
        system = _eliminate(system, var)
    return system is not None


def _bounds(system, var, dim):
    """Exact range of coordinate ``var`` over the (nonstrict) system."""
    for other in range(dim):
        if other == var or system is None:
            continue
        system = _eliminate(system, other)
    if system is None:
        return None
    lo, hi = None, None
    for coeffs, bound, _ in system:
        c = coeffs[var]
        v = bound / c
        if c > 0:
            hi = v if hi is None else min(hi, v)
        else:
            lo = v if lo is None else max(lo, v)
    return lo, hi


def coordinate_bounds(P: HPolytope, var: int):
    system = _prepare([(n, b, False) for n, b in P.inequalities])
    if system is None:
        return None
    return _bounds(system, var, P.dim)


def lattice_points(P: HPolytope) -> list[tuple[int, ...]]:
    """All integer points of ``P`` in lexicographic order; raises if ``P`` is unbounded."""
    base = _prepare([(n, b, False) for n, b in P.inequalities])
    if base is None:
        return []
    if P.dim == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def walk(system, prefix):
        k = len(prefix)
        if k == P.dim:
            out.append(tuple(prefix))
            return
        b = _bounds(system, k, P.dim)
        if b is None:
            return
        lo, hi = b
        if lo is None or hi is None:
            raise UnboundedError("polytope is unbounded")
        for value in range(math.ceil(lo), math.floor(hi) + 1):
            sub = []
            for coeffs, bound, strict in system:
                c = coeffs[k]
                new = list(coeffs)
                new[k] = Fraction(0)
                sub.append((tuple(new), bound - c * value, strict))
            sub = _tidy(sub)
            if sub is not None:
                walk(sub, prefix + [value])

    walk(base, [])
    return out


def polytope_dim(P: HPolytope) -> int:
    """Dimension of the affine hull; -1 for the empty polytope."""
    ineqs = [(n, b, False) for n, b in P.inequalities]
    if not feasible(ineqs, P.dim):
        return -1
    implicit = []
    for n, b in P.inequalities:
        if all(c == 0 for c in n):
            continue
        if not feasible(ineqs + [(n, b, True)], P.dim):
            implicit.append(n)
    return P.dim - (rank(implicit, P.dim) if implicit else 0)


def is_full_dimensional(P: HPolytope) -> bool:
    return feasible([(n, b, True) for n, b in P.inequalities], P.dim)


def vertex_edges(P: HPolytope, v: Sequence) -> list[tuple[int, ...]] | None:
    """Primitive directions of the edges of ``P`` leaving the vertex ``v``.

    Returns None when ``v`` is not a vertex of ``P``.
    """
    if not P.contains(v):
        return None
    normals = [P.inequalities[i][0] for i in P.tight(v)]
    n = P.dim
    if n == 0:
        return []
    if rank(normals, n) < n:
        return None
    dirs = set()
    for subset in itertools.combinations(range(len(normals)), n - 1):
        rows = [normals[i] for i in subset]
        if rows and rank(rows, n) < n - 1:
            continue
        ker = null_space(rows, n)
        if len(ker) != 1:
            continue
        d = scale_to_integers(ker[0])
        for sign in (1, -1):
            cand = tuple(sign * x for x in d)
            if all(_dot(a, cand) <= 0 for a in normals):
                dirs.add(cand)
    return sorted(dirs)


def vertices_2d(P: HPolytope) -> list[tuple[Fraction, Fraction]]:
    """Vertices of a bounded polygon in counter-clockwise order (for drawing)."""
    if P.dim != 2:
        raise ValueError("vertices_2d needs a planar polytope")
    pts = set()
    ineqs = P.inequalities
    for (n1, b1), (n2, b2) in itertools.combinations(ineqs, 2):
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det == 0:
            continue
        x = Fraction(b1 * n2[1] - b2 * n1[1], det)
        y = Fraction(n1[0] * b2 - n2[0] * b1, det)
        if P.contains((x, y)):
            pts.add((x, y))
    if len(pts) <= 2:
        return sorted(pts)
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))
