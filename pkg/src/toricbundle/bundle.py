"""Toric vector bundles in Klyachko form.

A bundle is a fan plus, for every ray, a decreasing filtration of ``Q^r``.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import fan as fanmod
from .fan import Divisor, Fan
from .linalg import (
    Echelon,
    Subspace,
    complement_in,
    full_space,
    intersect,
    intersect_all,
    rref,
    span_of_spaces,
    standard_basis,
    sym_basis,
    sym_embed,
    tensor_space,
    zero_space,
)
from .polyhedra import HPolytope, lattice_points


class BundleError(ValueError):
    pass


class IncompatibleFiltrationError(BundleError):
    def __init__(self, cone_index: int, cone: tuple, detail: str):
        super().__init__(f"filtrations are incompatible on cone {cone_index} {cone}: {detail}")
        self.cone_index = cone_index
        self.cone = cone


@dataclass(frozen=True)
class Filtration:
    """Decreasing filtration ``E(j)`` of ``Q^rank``.

    ``steps = ((j_1, F_1), ..., (j_m, F_m))`` with ``j`` increasing and ``F``
    strictly decreasing, ``F_1 = Q^rank``: ``E(j) = F_i`` for
    ``j_{i-1} < j <= j_i``, ``E(j) = Q^rank`` for ``j <= j_1`` and ``0`` past ``j_m``.
    So the ``j_i`` are the largest values at which each space still appears.
    """

    rank: int
    steps: tuple

    def __post_init__(self):
        if not self.steps:
            raise BundleError("empty filtration")
        if not self.steps[0][1].is_full():
            raise BundleError("filtration does not start at the full space")
        prev_j, prev_F = None, None
        for j, F in self.steps:
            if F.ambient_dim != self.rank:
                raise BundleError("filtration subspace has the wrong ambient dimension")
            if F.is_zero():
                raise BundleError("zero space recorded as a filtration step")
            if prev_j is not None:
                if j <= prev_j:
                    raise BundleError("filtration jumps are not increasing")
                if F.dim >= prev_F.dim or not F.issubspace(prev_F):
                    raise BundleError("filtration is not strictly decreasing")
            prev_j, prev_F = j, F

    @property
    def jumps(self) -> tuple:
        return tuple(j for j, _ in self.steps)

    def at(self, j: int) -> Subspace:
        i = bisect.bisect_left(self.jumps, j)
        if i == len(self.steps):
            return zero_space(self.rank)
        return self.steps[i][1]

    def level(self, v: Sequence) -> int:
        """Largest ``j`` with ``v`` in ``E(j)`` (``v`` nonzero)."""
        for j, F in reversed(self.steps):
            if F.contains(v):
                return j
        raise BundleError("zero vector has no filtration level")

    def space_level(self, V: Subspace) -> int:
        for j, F in reversed(self.steps):
            if V.issubspace(F):
                return j
        raise BundleError("zero space has no filtration level")

    def shifted(self, d: int) -> "Filtration":
        return Filtration(self.rank, tuple((j + d, F) for j, F in self.steps))

    def scaled(self, k: int) -> "Filtration":
        return Filtration(self.rank, tuple((j * k, F) for j, F in self.steps))

    def adapted_basis(self) -> list[tuple[tuple, int]]:
        """Pairs ``(vector, level)`` forming a basis compatible with every step."""
        out = []
        below = zero_space(self.rank)
        for j, F in reversed(self.steps):
            for v in complement_in(F, below):
                out.append((v, j))
            below = F
        return out

    @classmethod
    def from_function(cls, rank: int, candidates: Iterable[int], space: Callable[[int], Subspace]) -> "Filtration":
        """Build from an evaluator whose value can only change right after a candidate."""
        cands = sorted(set(candidates))
        vals = [space(c) for c in cands]
        steps = []
        for i, (c, V) in enumerate(zip(cands, vals)):
            nxt = vals[i + 1] if i + 1 < len(vals) else zero_space(rank)
            if V != nxt and not V.is_zero():
                steps.append((c, V))
        return cls(rank, tuple(steps))

    @classmethod
    def from_vectors(cls, rank: int, pairs: Sequence[tuple[Sequence, int]]) -> "Filtration":
        """``E(j) = span{v : level(v) >= j}`` for an adapted basis given as ``(v, level)``."""
        levels = sorted({lv for _, lv in pairs})

        def space(j):
            return rref([v for v, lv in pairs if lv >= j], rank)

        return cls.from_function(rank, levels, space)

    @classmethod
    def from_starts(cls, rank: int, entries: Sequence[tuple[int, Subspace]]) -> "Filtration":
        """Build from ``(s, V)`` meaning ``E(j) = V`` for ``s <= j`` until the next entry.

        The first entry must be the full space and the last one the zero space.
        """
        if not entries:
            raise BundleError("empty filtration")
        if not entries[-1][1].is_zero():
            raise BundleError("filtration does not terminate")
        steps = []
        for (s, V), (s_next, _) in zip(entries, entries[1:]):
            steps.append((s_next - 1, V))
        return cls(rank, tuple(steps))

    def starts(self) -> list[tuple[int, Subspace]]:
        """Inverse of :meth:`from_starts`."""
        out = []
        prev = None
        for j, F in self.steps:
            out.append((j if prev is None else prev + 1, F))
            prev = j
        out.append((prev + 1, zero_space(self.rank)))
        return out


@dataclass(frozen=True)
class ToricVectorBundle:
    fan: Fan
    rank: int
    filtrations: tuple
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.filtrations) != self.fan.nrays:
            raise BundleError("need one filtration per ray")
        for f in self.filtrations:
            if f.rank != self.rank:
                raise BundleError("filtration rank differs from bundle rank")

    def E(self, ray: int, j: int) -> Subspace:
        return self.filtrations[ray].at(j)

    def divisor_of_vector(self, v: Sequence) -> Divisor:
        return tuple(f.level(v) for f in self.filtrations)

    def divisor_of_space(self, V: Subspace) -> Divisor:
        return tuple(f.space_level(V) for f in self.filtrations)


def make_bundle(fan: Fan, filtrations: Sequence[Filtration], validate: bool = True) -> ToricVectorBundle:
    E = ToricVectorBundle(fan, filtrations[0].rank if filtrations else 0, tuple(filtrations))
    if validate:
        validate_bundle(E)
    return E


# Constructors


def line_bundle(fan: Fan, D: Divisor) -> ToricVectorBundle:
    return split_bundle(fan, [D])


def split_bundle(fan: Fan, divisors: Sequence[Divisor]) -> ToricVectorBundle:
    """``O(D_1) + ... + O(D_r)`` with the standard basis as splitting."""
    r = len(divisors)
    basis = standard_basis(r)
    filts = [Filtration.from_vectors(r, [(basis[i], divisors[i][rho]) for i in range(r)]) for rho in range(fan.nrays)]
    return ToricVectorBundle(fan, r, tuple(filts))


def trivial_bundle(fan: Fan, r: int = 1) -> ToricVectorBundle:
    return split_bundle(fan, [fanmod.zero_divisor(fan)] * r)


def tangent_bundle(fan: Fan) -> ToricVectorBundle:
    """``E(j) = Q^n`` for ``j <= 0``, ``span(rho)`` for ``j = 1``, ``0`` after."""
    n = fan.dim
    filts = [Filtration(n, ((0, full_space(n)), (1, rref([r], n)))) for r in fan.rays]
    return ToricVectorBundle(fan, n, tuple(filts))


# Compatibility and local splitting


@dataclass(frozen=True)
class BundleReport:
    rank: int
    characters: tuple  # per maximal cone: tuple of (u, multiplicity)


def _graded_pieces(E: ToricVectorBundle, cone: tuple):
    """Yield ``(values, F_c, F_>c)`` over the jump grid of ``cone``."""
    filts = [E.filtrations[i] for i in cone]
    r = E.rank
    for c in itertools.product(*[f.jumps for f in filts]):
        spaces = [f.at(v) for f, v in zip(filts, c)]
        Fc = intersect_all(spaces, r)
        if Fc.is_zero():
            continue
        higher = []
        for i, f in enumerate(filts):
            higher.append(intersect(Fc, f.at(c[i] + 1)))
        yield c, Fc, span_of_spaces(higher, r)


def _inclusion_exclusion(E: ToricVectorBundle, cone: tuple, c: tuple) -> int:
    filts = [E.filtrations[i] for i in cone]
    total = 0
    for S in itertools.product((0, 1), repeat=len(cone)):
        V = intersect_all([f.at(v + s) for f, v, s in zip(filts, c, S)], E.rank)
        total += (-1) ** sum(S) * V.dim
    return total


def _cone_characters(E: ToricVectorBundle, ci: int) -> tuple:
    key = ("chars", ci)
    if key in E._memo:
        return E._memo[key]
    fan = E.fan
    cone = fan.max_cones[ci]
    filts = [E.filtrations[i] for i in cone]
    ech = Echelon(E.rank)
    witnesses = []
    chars = []
    for c, Fc, Fhi in _graded_pieces(E, cone):
        m = Fc.dim - Fhi.dim
        if m == 0:
            continue
        if _inclusion_exclusion(E, cone, c) != m:
            raise IncompatibleFiltrationError(ci, cone, f"graded piece at {c} disagrees with inclusion-exclusion")
        for w in complement_in(Fc, Fhi):
            if not ech.add(w):
                raise IncompatibleFiltrationError(ci, cone, "graded pieces are not independent")
            witnesses.append((w, c))
        chars.append((fanmod.character_on_cone(fan, cone, c), m))
    if ech.dim != E.rank:
        raise IncompatibleFiltrationError(ci, cone, "graded pieces do not span the fibre")
    for pos, f in enumerate(filts):
        for l in f.jumps:
            rebuilt = rref([w for w, c in witnesses if c[pos] >= l], E.rank)
            if rebuilt != f.at(l):
                raise IncompatibleFiltrationError(ci, cone, f"ray {cone[pos]} is not split by the graded pieces at level {l}")
    for u, _ in chars:
        if any(isinstance(x, Fraction) for x in u):
            raise BundleError("cone is not unimodular")
    result = tuple(sorted(chars))
    E._memo[key] = result
    return result


def validate_bundle(E: ToricVectorBundle) -> BundleReport:
    """Check the compatibility condition on every maximal cone.

    On each cone the graded pieces of the multi-filtration are lifted to
    complements; the bundle is compatible iff these lifts form a basis of the fibre
    that splits every filtration of the cone.  Multiplicities are cross-checked
    against inclusion-exclusion.
    """
    fanmod.require_smooth_complete(E.fan)
    chars = tuple(_cone_characters(E, ci) for ci in range(len(E.fan.max_cones)))
    return BundleReport(E.rank, chars)


def local_characters(E: ToricVectorBundle, cone_index: int) -> tuple:
    """``((u, multiplicity), ...)`` sorted by ``u``."""
    return _cone_characters(E, cone_index)


def expanded_characters(E: ToricVectorBundle, cone_index: int) -> list[tuple]:
    out = []
    for u, m in local_characters(E, cone_index):
        out.extend([u] * m)
    return out


# Operations


def _same_fan(E: ToricVectorBundle, F: ToricVectorBundle) -> None:
    if E.fan != F.fan:
        raise BundleError("bundles live on different fans")


def twist(E: ToricVectorBundle, D: Divisor) -> ToricVectorBundle:
    """``E (x) O(D)``: jumps on ray ``rho`` shift by ``D_rho``."""
    filts = tuple(f.shifted(int(d)) for f, d in zip(E.filtrations, D))
    return ToricVectorBundle(E.fan, E.rank, filts)


def _tensor_filtration(f: Filtration, g: Filtration) -> Filtration:
    n = f.rank * g.rank

    def space(j):
        parts = [tensor_space(f.at(a), g.at(j - a)) for a in f.jumps]
        return span_of_spaces(parts, n)

    cands = [a + b for a in f.jumps for b in g.jumps]
    return Filtration.from_function(n, cands, space)


def tensor(E: ToricVectorBundle, F: ToricVectorBundle) -> ToricVectorBundle:
    _same_fan(E, F)
    filts = tuple(_tensor_filtration(f, g) for f, g in zip(E.filtrations, F.filtrations))
    return ToricVectorBundle(E.fan, E.rank * F.rank, filts)


def _sym_filtration(f: Filtration, k: int) -> Filtration:
    basis = f.adapted_basis()
    dim = sym_basis(f.rank, k).dim
    pairs = []
    for combo in itertools.combinations_with_replacement(range(len(basis)), k):
        vec = sym_embed([basis[i][0] for i in combo], f.rank)
        pairs.append((vec, sum(basis[i][1] for i in combo)))
    return Filtration.from_vectors(dim, pairs)


def sym_power(E: ToricVectorBundle, k: int) -> ToricVectorBundle:
    if k < 1:
        raise BundleError("symmetric power needs k >= 1")
    key = ("sym", k)
    if key not in E._memo:
        if k == 1:
            E._memo[key] = E
        else:
            filts = tuple(_sym_filtration(f, k) for f in E.filtrations)
            E._memo[key] = ToricVectorBundle(E.fan, sym_basis(E.rank, k).dim, filts)
    return E._memo[key]


def frobenius_pullback(E: ToricVectorBundle, k: int) -> ToricVectorBundle:
    """Pullback along multiplication by ``k``: the jump ``j`` moves to ``jk``."""
    if k < 1:
        raise BundleError("Frobenius pullback needs k >= 1")
    return ToricVectorBundle(E.fan, E.rank, tuple(f.scaled(k) for f in E.filtrations))


def direct_sum(E: ToricVectorBundle, F: ToricVectorBundle) -> ToricVectorBundle:
    _same_fan(E, F)
    r, s = E.rank, F.rank

    def lift(v, offset):
        w = [Fraction(0)] * (r + s)
        for i, x in enumerate(v):
            w[offset + i] = x
        return tuple(w)

    filts = []
    for f, g in zip(E.filtrations, F.filtrations):
        pairs = [(lift(v, 0), j) for v, j in f.adapted_basis()]
        pairs += [(lift(v, r), j) for v, j in g.adapted_basis()]
        filts.append(Filtration.from_vectors(r + s, pairs))
    return ToricVectorBundle(E.fan, r + s, tuple(filts))


# Global sections


def h0_component(E: ToricVectorBundle, u: Sequence[int]) -> Subspace:
    spaces = [E.E(i, fanmod.pairing(u, rho)) for i, rho in enumerate(E.fan.rays)]
    return intersect_all(spaces, E.rank)


def support_polytope(E: ToricVectorBundle) -> HPolytope:
    """``{u : <u, rho> <= max jump of rho}``, containing every ``u`` with nonzero sections."""
    return HPolytope(E.fan.dim, tuple((rho, f.jumps[-1]) for rho, f in zip(E.fan.rays, E.filtrations)))


def h0_by_character(E: ToricVectorBundle) -> dict:
    out = {}
    for u in lattice_points(support_polytope(E)):
        d = h0_component(E, u).dim
        if d:
            out[u] = d
    return out


def h0_dim(E: ToricVectorBundle) -> int:
    return sum(h0_by_character(E).values())


def filtration_dims(E: ToricVectorBundle) -> set:
    return {F.dim for f in E.filtrations for _, F in f.steps} | {0}
