"""The intersection lattice, the matroid of a bundle, its parliament and Cayley data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fan as fanmod
from .bundle import ToricVectorBundle
from .fan import Divisor
from .linalg import Echelon, Subspace, express_in, full_space, intersect, null_space, rank, rref, to_vector
from .polyhedra import HPolytope, lattice_points, polytope_dim

FRESH = "fresh"
SEEDED = "seeded-product"


@dataclass(frozen=True)
class LatticeElement:
    space: Subspace
    divisor: Divisor


@dataclass(frozen=True)
class ParliamentEntry:
    vector: tuple
    divisor: Divisor
    polytope: HPolytope
    provenance: str = FRESH
    seed: int | None = None  # index into the seed list when provenance is seeded


@dataclass(frozen=True)
class Matroid:
    rank: int
    ambient_dim: int
    ground: tuple  # tuple[ParliamentEntry, ...]
    lattice: tuple  # tuple[LatticeElement, ...]

    @property
    def vectors(self) -> list[tuple]:
        return [e.vector for e in self.ground]

    def rank_of(self, subset: Sequence[int]) -> int:
        if not subset:
            return 0
        return rank([self.ground[i].vector for i in subset], self.ambient_dim)

    def inside(self, V: Subspace) -> list[int]:
        return [i for i, e in enumerate(self.ground) if V.contains(e.vector)]


def intersection_lattice(E: ToricVectorBundle) -> tuple:
    """All nonzero ``cap_rho E^rho(j_rho)`` over jump tuples, deduplicated.

    Jump tuples are walked in decreasing order (first ray slowest); elements keep
    the order of first appearance and are then stably sorted by dimension.
    """
    key = ("lattice",)
    if key in E._memo:
        return E._memo[key]
    r = E.rank
    seen: dict = {}
    filts = E.filtrations

    def walk(i, current):
        if i == len(filts):
            if current not in seen:
                seen[current] = None
            return
        for j in reversed(filts[i].jumps):
            nxt = intersect(current, filts[i].at(j))
            if not nxt.is_zero():
                walk(i + 1, nxt)

    walk(0, full_space(r))
    spaces = sorted(seen, key=lambda V: V.dim)
    out = tuple(LatticeElement(V, E.divisor_of_space(V)) for V in spaces)
    E._memo[key] = out
    return out


def build_matroid(E: ToricVectorBundle, seeds: Sequence[Sequence] = ()) -> Matroid:
    """Ground set of ``M(E)``: lattice elements by increasing dimension, each
    completed from the vectors already chosen inside it, preferring ``seeds``."""
    seeds = [to_vector(s) for s in seeds]
    lattice = intersection_lattice(E)
    chosen: list[tuple[tuple, int | None]] = []
    for el in lattice:
        V = el.space
        inside = [v for v, _ in chosen if V.contains(v)]
        ech = Echelon(E.rank, inside)
        if ech.dim == V.dim:
            continue
        for si, s in enumerate(seeds):
            if ech.dim == V.dim:
                break
            if V.contains(s) and ech.add(s):
                chosen.append((s, si))
        for row in V.rows:
            if ech.dim == V.dim:
                break
            if ech.add(row):
                chosen.append((tuple(row), None))
    ground = []
    for v, si in chosen:
        D = E.divisor_of_vector(v)
        ground.append(
            ParliamentEntry(v, D, fanmod.polytope(E.fan, D), SEEDED if si is not None else FRESH, si)
        )
    return Matroid(E.rank, E.rank, tuple(ground), lattice)


def matroid(E: ToricVectorBundle) -> Matroid:
    key = ("matroid",)
    if key not in E._memo:
        E._memo[key] = build_matroid(E)
    return E._memo[key]


def parliament(E: ToricVectorBundle) -> tuple:
    return matroid(E).ground


def h0_dim_via_parliament(E: ToricVectorBundle, u: Sequence[int], M: Matroid | None = None) -> int:
    """Rank of the ground vectors whose polytope contains ``u``."""
    M = M or matroid(E)
    vecs = [e.vector for e in M.ground if e.polytope.contains(u)]
    return rank(vecs, M.ambient_dim) if vecs else 0


def spanning_defect(M: Matroid) -> list[LatticeElement]:
    """Lattice elements not spanned by the ground vectors they contain (should be empty)."""
    bad = []
    for el in M.lattice:
        vecs = [M.ground[i].vector for i in M.inside(el.space)]
        if rref(vecs, M.ambient_dim) != el.space:
            bad.append(el)
    return bad


# Circuits


def fundamental_circuits(M: Matroid, subset: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Circuits of ``subset`` relative to its lexicographically first basis.

    Each non-basis element ``e`` yields the unique relation among ``e`` and the
    basis; the coefficients are scaled so that the first nonzero one is 1.
    """
    ech = Echelon(M.ambient_dim)
    basis = []
    for i in subset:
        if ech.add(M.ground[i].vector):
            basis.append(i)
    out = []
    for e in subset:
        if e in basis:
            continue
        # solve v_e = sum c_b v_b  =>  relation v_e - sum c_b v_b = 0
        coeffs = _express(M, e, basis)
        rel = {e: Fraction(1)}
        for b, c in zip(basis, coeffs):
            if c != 0:
                rel[b] = -c
        support = tuple(sorted(rel))
        lam = [rel[i] for i in support]
        lead = lam[0]
        out.append((support, tuple(x / lead for x in lam)))
    return out


def _express(M: Matroid, e: int, basis: Sequence[int]) -> list[Fraction]:
    return express_in(M.ground[e].vector, [M.ground[b].vector for b in basis])


def relation_circuits(M: Matroid) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Circuits generating every linear relation supported in a lattice element.

    For each lattice element ``V`` the fundamental circuits of the ground vectors
    inside ``V`` span all relations among them; deduplicated by support.
    """
    seen = {}
    for el in M.lattice:
        for support, lam in fundamental_circuits(M, M.inside(el.space)):
            seen.setdefault(support, lam)
    return sorted(seen.items())


def all_circuits(M: Matroid, max_size: int | None = None) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Every circuit by exhaustive search (exponential; meant for small matroids)."""
    g = len(M.ground)
    limit = (M.rank + 1) if max_size is None else max_size
    found: list[tuple[int, ...]] = []
    out = []
    for size in range(1, limit + 1):
        for subset in itertools.combinations(range(g), size):
            if any(set(c) <= set(subset) for c in found):
                continue
            vecs = [M.ground[i].vector for i in subset]
            if rank(vecs, M.ambient_dim) == size - 1:
                # minimal dependent: the kernel is one-dimensional with full support
                ker = null_space([list(col) for col in zip(*vecs)], size)
                lam = ker[0]
                if all(x != 0 for x in lam):
                    lead = lam[0]
                    found.append(subset)
                    out.append((subset, tuple(Fraction(x) / lead for x in lam)))
    return out


# Cayley data


@dataclass(frozen=True)
class CayleyData:
    """Lifted fan data for ``O_{P(E)}(1)`` pulled back to a toric variety.

    ``lifted_rays[rho] = (rho, a_1rho - a_0rho, ..., a_srho - a_0rho)`` and the
    simplex rays are ``w_i = e_i`` and ``w_0 = -sum e_i``.  The big polytope is
    ``P = {(y, x) : <(y,x), rho'> <= a_0rho, x_i <= 0, -sum x_i <= 1}``; its slice
    over ``x = 0`` is ``P_{e_0}`` and over ``x = -e_i`` is ``P_{e_i}``.
    """

    n: int
    s: int
    lifted_rays: tuple
    simplex_rays: tuple
    big_polytope: HPolytope
    divisor: tuple  # coefficients on lifted rays, then on simplex rays (w_0, ..., w_s)


def cayley_data(E: ToricVectorBundle, M: Matroid | None = None) -> CayleyData:
    M = M or matroid(E)
    n = E.fan.dim
    ground = M.ground
    s = len(ground) - 1
    a = [e.divisor for e in ground]
    lifted = []
    for rho_i, rho in enumerate(E.fan.rays):
        lifted.append(tuple(rho) + tuple(a[i][rho_i] - a[0][rho_i] for i in range(1, s + 1)))
    simplex = [tuple([-1] * s)] + [tuple(1 if j == i else 0 for j in range(s)) for i in range(s)]
    simplex = tuple(((0,) * n) + w for w in simplex)
    ineqs = [(lr, a[0][i]) for i, lr in enumerate(lifted)]
    ineqs += [(w, 1 if i == 0 else 0) for i, w in enumerate(simplex)]
    P = HPolytope(n + s, tuple(ineqs))
    D = tuple(a[0][i] for i in range(len(lifted))) + (1,) + (0,) * s
    return CayleyData(n, s, tuple(lifted), simplex, P, D)


def cayley_slice(C: CayleyData, i: int) -> HPolytope:
    """The fibre of the big polytope over the simplex vertex of ground vector ``i``."""
    x = [0] * C.s
    if i > 0:
        x[i - 1] = -1
    ineqs = []
    for normal, b in C.big_polytope.inequalities:
        y, xx = normal[: C.n], normal[C.n:]
        off = sum(p * q for p, q in zip(xx, x))
        if any(y):
            ineqs.append((tuple(y), b - off))
        elif off > b:
            ineqs.append((tuple([0] * C.n), -1))  # infeasible slice
    return HPolytope(C.n, tuple(ineqs))


def cayley_consistent(E: ToricVectorBundle, C: CayleyData | None = None) -> bool:
    """Slices over the simplex vertices have the same points as the parliament polytopes,
    and the big polytope's lattice points split over those vertices."""
    M = matroid(E)
    C = C or cayley_data(E, M)
    for i, entry in enumerate(M.ground):
        sl = cayley_slice(C, i)
        if set(lattice_points(sl)) != set(lattice_points(entry.polytope)):
            return False
        if polytope_dim(sl) != polytope_dim(entry.polytope):
            return False
    total = sum(len(lattice_points(e.polytope)) for e in M.ground)
    return len(lattice_points(C.big_polytope)) == total
