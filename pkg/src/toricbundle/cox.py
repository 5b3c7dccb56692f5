"""Cox ring data of the projectivized bundle: the generator set, the ideals I and J,
a minimised presentation, and checks against global sections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fan as fanmod
from .bundle import ToricVectorBundle, filtration_dims, h0_component, sym_power, twist
from .linalg import Echelon, express_in, rank, sym_multiply
from .matroid import SEEDED, Matroid, build_matroid, relation_circuits
from .polyhedra import lattice_points


class CoxError(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    index: int
    degree: int
    vector: tuple
    divisor: tuple


@dataclass(frozen=True)
class Level:
    """The seeded matroid of ``S^k E`` with the T-monomial of each ground vector."""

    degree: int
    bundle: ToricVectorBundle
    matroid: Matroid
    factors: tuple  # per ground vector: sorted tuple of generator indices


@dataclass(frozen=True)
class GeneratorSet:
    elements: tuple  # tuple[Generator, ...]
    k_max: int
    levels: tuple  # tuple[Level, ...], degrees 1..k_max
    stabilized_at: int | None
    fresh_degrees: tuple  # degrees >= 2 that contributed fresh generators

    def of_degree(self, k: int) -> list[Generator]:
        return [g for g in self.elements if g.degree == k]


def _product(gens: Sequence[Generator], factors: Sequence[int], rank_: int) -> tuple:
    v, d = gens[factors[0]].vector, gens[factors[0]].degree
    for f in factors[1:]:
        g = gens[f]
        v = sym_multiply(v, d, g.vector, g.degree, rank_)
        d += g.degree
    return v


def _multisets(gens: Sequence[Generator], k: int, min_len: int = 1):
    """Sorted index tuples of generators whose degrees sum to ``k``."""
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            if len(acc) >= min_len:
                out.append(tuple(acc))
            return
        for i in range(start, len(gens)):
            d = gens[i].degree
            if d <= remaining:
                acc.append(i)
                rec(i, remaining - d, acc)
                acc.pop()

    rec(0, k, [])
    return out


def frak_M(E: ToricVectorBundle, k_max: int) -> GeneratorSet:
    """Generators of degrees ``1..k_max``: fresh ground vectors of the matroid of
    ``S^k E`` built with all degree-``k`` products of earlier generators as seeds."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    memo = E._memo.setdefault(("frak",), {"gens": [], "levels": []})
    gens: list[Generator] = memo["gens"]
    levels: list[Level] = memo["levels"]
    while len(levels) < k_max:
        k = len(levels) + 1
        S = sym_power(E, k)
        seed_factors = _multisets(gens, k, min_len=2)
        seeds = [_product(gens, f, E.rank) for f in seed_factors]
        M = build_matroid(S, seeds)
        factors = []
        for entry in M.ground:
            if entry.provenance == SEEDED:
                factors.append(seed_factors[entry.seed])
            else:
                g = Generator(len(gens), k, entry.vector, entry.divisor)
                gens.append(g)
                factors.append((g.index,))
        levels.append(Level(k, S, M, tuple(factors)))
    elements = tuple(g for g in gens if g.degree <= k_max)
    fresh = sorted({g.degree for g in elements if g.degree >= 2})
    last = max(g.degree for g in elements) if elements else 0
    stab = last + 1 if last + 1 <= k_max else None
    return GeneratorSet(elements, k_max, tuple(levels[:k_max]), stab, tuple(fresh))


@dataclass(frozen=True)
class MDSStatus:
    definitive: bool  # True when the small-dimension criterion certifies finiteness
    fast_path: bool
    stabilized_through: int | None
    stabilized_at: int | None
    fresh_degrees: tuple


def mds_status(E: ToricVectorBundle, k_max: int) -> MDSStatus:
    """Bounded-degree evidence for finite generation.

    If every filtration subspace has dimension 0, 1 or the rank, all symmetric
    powers are spanned by products of degree-1 vectors and the answer is definitive.
    Otherwise ``stabilized_through = k_max`` only records that degree ``k_max``
    contributed nothing new.
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    fast = filtration_dims(E) <= {0, 1, E.rank}
    G = frak_M(E, k_max)
    through = k_max if not G.of_degree(k_max) else None
    return MDSStatus(fast, fast, through, G.stabilized_at, G.fresh_degrees)


# Polynomials: dict {(s_exponents, t_multiset): coefficient}


@dataclass(frozen=True)
class Relation:
    kind: str  # "I" or "J"
    degree: int
    base: tuple  # base part of the multidegree
    terms: tuple  # tuple[(s_exponents, t_multiset, coefficient), ...]

    def as_dict(self) -> dict:
        return {(s, t): c for s, t, c in self.terms}


def _sorted_terms(poly: dict) -> tuple:
    items = [(s, t, c) for (s, t), c in poly.items() if c != 0]
    items.sort(key=lambda x: (x[1], tuple(-e for e in x[0])))
    return tuple(items)


def monomial_degree(gens: Sequence[Generator], s: Sequence[int], t: Sequence[int]) -> tuple[int, tuple]:
    k = sum(gens[i].degree for i in t)
    base = list(s)
    for i in t:
        base = [b - d for b, d in zip(base, gens[i].divisor)]
    return k, tuple(base)


def _make_relation(kind: str, gens, poly: dict) -> Relation | None:
    terms = _sorted_terms(poly)
    if not terms:
        return None
    degs = {monomial_degree(gens, s, t) for s, t, _ in terms}
    if len(degs) != 1:
        raise CoxError("relation is not multihomogeneous")
    k, base = degs.pop()
    return Relation(kind, k, base, terms)


def _merge(t1: Sequence[int], t2: Sequence[int]) -> tuple:
    return tuple(sorted(tuple(t1) + tuple(t2)))


def ideal_I(E: ToricVectorBundle, degrees: Sequence[int], G: GeneratorSet | None = None) -> list[Relation]:
    """Circuit relations ``sum lambda_i S^(D_i - beta) T_{v_i}`` in each requested degree."""
    G = G or frak_M(E, max(degrees))
    gens = G.elements
    out = []
    for k in degrees:
        level = G.levels[k - 1]
        M = level.matroid
        for support, lam in relation_circuits(M):
            divs = [M.ground[i].divisor for i in support]
            beta = tuple(min(col) for col in zip(*divs))
            poly: dict = {}
            for i, c in zip(support, lam):
                s = tuple(a - b for a, b in zip(M.ground[i].divisor, beta))
                key = (s, level.factors[i])
                poly[key] = poly.get(key, 0) + c
            rel = _make_relation("I", gens, poly)
            if rel is not None:
                out.append(rel)
    return out


def ideal_J(E: ToricVectorBundle, k_max: int, G: GeneratorSet | None = None) -> list[Relation]:
    """Product relations ``T_v1 T_v2 - sum a_i T_wi S_wi`` for ground vectors of
    degrees ``a + b <= k_max`` whose product is not itself a ground vector."""
    G = G or frak_M(E, k_max)
    gens = G.elements
    out = []
    ground = [(lv.degree, i) for lv in G.levels for i in range(len(lv.matroid.ground))]
    for (a, i), (b, j) in itertools.combinations_with_replacement(ground, 2):
        if a + b > k_max:
            continue
        la, lb, lc = G.levels[a - 1], G.levels[b - 1], G.levels[a + b - 1]
        e1, e2 = la.matroid.ground[i], lb.matroid.ground[j]
        prod = sym_multiply(e1.vector, a, e2.vector, b, E.rank)
        t12 = _merge(la.factors[i], lb.factors[j])
        Dsum = tuple(x + y for x, y in zip(e1.divisor, e2.divisor))
        Mc = lc.matroid
        V = h0_component(twist(lc.bundle, tuple(-d for d in Dsum)), (0,) * E.fan.dim)
        ech = Echelon(Mc.ambient_dim)
        basis = [g for g in Mc.inside(V) if ech.add(Mc.ground[g].vector)]
        coeffs = express_in(prod, [Mc.ground[g].vector for g in basis])
        poly: dict = {(tuple([0] * E.fan.nrays), t12): Fraction(1)}
        for g, c in zip(basis, coeffs):
            if c == 0:
                continue
            s = tuple(x - y for x, y in zip(Mc.ground[g].divisor, Dsum))
            if min(s) < 0:
                raise CoxError("non-effective exponent in a product relation")
            key = (s, lc.factors[g])
            poly[key] = poly.get(key, 0) - c
        rel = _make_relation("J", gens, poly)
        if rel is not None:
            out.append(rel)
    return out


# Graded pieces of the polynomial ring and ideal membership


class _Graded:
    def __init__(self, gens: Sequence[Generator], nrays: int):
        self.gens = gens
        self.nrays = nrays
        self._parts: dict = {}

    def t_parts(self, k: int) -> list[tuple]:
        if k not in self._parts:
            self._parts[k] = [()] if k == 0 else _multisets(self.gens, k)
        return self._parts[k]

    def t_divisor(self, t: Sequence[int]) -> tuple:
        D = [0] * self.nrays
        for i in t:
            D = [a + b for a, b in zip(D, self.gens[i].divisor)]
        return tuple(D)

    def monomials(self, k: int, base: Sequence[int]) -> list[tuple]:
        out = []
        for t in self.t_parts(k):
            s = tuple(b + d for b, d in zip(base, self.t_divisor(t)))
            if min(s, default=0) >= 0:
                out.append((s, t))
        return out

    def multiples(self, rel: Relation, k: int, base: Sequence[int]) -> list[dict]:
        if rel.degree > k:
            return []
        shift = [b - r for b, r in zip(base, rel.base)]
        out = []
        for t in self.t_parts(k - rel.degree):
            s = tuple(x + d for x, d in zip(shift, self.t_divisor(t)))
            if min(s, default=0) < 0:
                continue
            poly = {}
            for rs, rt, c in rel.terms:
                poly[(tuple(a + b for a, b in zip(rs, s)), _merge(rt, t))] = c
            out.append(poly)
        return out


def _span_rank(polys: Sequence[dict], index: dict) -> int:
    if not polys:
        return 0
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(index)
        for key, c in p.items():
            row[index[key]] = Fraction(c)
        rows.append(row)
    return rank(rows, len(index))


def in_ideal(graded: _Graded, rel: Relation, relations: Sequence[Relation]) -> bool:
    polys = []
    for h in relations:
        polys.extend(graded.multiples(h, rel.degree, rel.base))
    if not polys:
        return False
    keys = {key for p in polys for key in p} | set(rel.as_dict())
    index = {key: i for i, key in enumerate(sorted(keys))}
    r0 = _span_rank(polys, index)
    return _span_rank(polys + [rel.as_dict()], index) == r0


def fine_quotient_dim(graded: _Graded, relations: Sequence[Relation], k: int, base: Sequence[int]) -> int:
    """Dimension of the degree ``(k, base)`` piece of the presented quotient."""
    mons = graded.monomials(k, base)
    if not mons:
        return 0
    index = {m: i for i, m in enumerate(mons)}
    polys = []
    for h in relations:
        polys.extend(graded.multiples(h, k, base))
    return len(mons) - _span_rank(polys, index)


# Presentation


@dataclass(frozen=True)
class CoxPresentation:
    nrays: int
    generators: tuple  # tuple[Generator, ...]
    relations: tuple  # tuple[Relation, ...]
    k_max: int
    status: MDSStatus

    def variables(self) -> list[tuple[str, int, tuple]]:
        out = []
        for i in range(self.nrays):
            out.append((f"S{i}", 0, tuple(1 if j == i else 0 for j in range(self.nrays))))
        for g in self.generators:
            out.append((f"T{g.index}", g.degree, tuple(-d for d in g.divisor)))
        return out

    def graded(self) -> _Graded:
        return _Graded(self.generators, self.nrays)


def minimise(gens: Sequence[Generator], nrays: int, candidates: Sequence[Relation]) -> list[Relation]:
    """Drop every candidate already in the ideal of the ones kept before it."""
    graded = _Graded(gens, nrays)
    kept: list[Relation] = []
    order = sorted(range(len(candidates)), key=lambda i: (candidates[i].degree, candidates[i].kind, i))
    for i in order:
        if not in_ideal(graded, candidates[i], kept):
            kept.append(candidates[i])
    return kept


def presentation(E: ToricVectorBundle, k_max: int, minimal: bool = True) -> CoxPresentation:
    G = frak_M(E, k_max)
    if k_max >= 2:
        status = mds_status(E, k_max)
    else:
        fast = filtration_dims(E) <= {0, 1, E.rank}
        status = MDSStatus(fast, fast, None, G.stabilized_at, G.fresh_degrees)
    rels = ideal_I(E, list(range(1, k_max + 1)), G) + ideal_J(E, k_max, G)
    if minimal:
        rels = minimise(G.elements, E.fan.nrays, rels)
    return CoxPresentation(E.fan.nrays, G.elements, tuple(rels), k_max, status)


def format_term(s: Sequence[int], t: Sequence[int]) -> str:
    parts = []
    for g, cnt in sorted({x: t.count(x) for x in t}.items()):
        parts.append(f"T{g}" + (f"^{cnt}" if cnt > 1 else ""))
    for i, e in enumerate(s):
        if e:
            parts.append(f"S{i}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) if parts else "1"


def format_relation(rel: Relation) -> str:
    out = ""
    for n, (s, t, c) in enumerate(rel.terms):
        mono = format_term(s, t)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono if mag == 1 else f"{mag}*{mono}"
        out += (("-" if sign == "-" else "") if n == 0 else f" {sign} ") + body
    return out


# Checks


def relation_vanishes(E: ToricVectorBundle, gens: Sequence[Generator], rel: Relation) -> bool:
    """Substitute generator vectors for the T's: the sum is zero in ``S^k E`` and every
    term lies in the section space of its degree."""
    k = rel.degree
    S = sym_power(E, k)
    space = h0_component(twist(S, rel.base), (0,) * E.fan.dim)
    total = None
    for s, t, c in rel.terms:
        v = _product(gens, t, E.rank)
        if not space.contains(v):
            return False
        v = [c * x for x in v]
        total = v if total is None else [a + b for a, b in zip(total, v)]
    return all(x == 0 for x in total)


def hilbert_dim(P: CoxPresentation, fan: fanmod.Fan, k: int, t: Sequence[int]) -> tuple[int, dict]:
    """Dimension of the Picard degree ``(k, [t])`` piece: sum over characters ``u``
    of the fine pieces of base degree ``t - <u, .>``."""
    graded = P.graded()
    us = set()
    for tp in graded.t_parts(k):
        D = graded.t_divisor(tp)
        bound = tuple(a + b for a, b in zip(t, D))
        us.update(lattice_points(fanmod.polytope(fan, bound)))
    per_u = {}
    for u in sorted(us):
        base = tuple(tr - fanmod.pairing(u, rho) for tr, rho in zip(t, fan.rays))
        d = fine_quotient_dim(graded, P.relations, k, base)
        if d:
            per_u[u] = d
    return sum(per_u.values()), per_u
