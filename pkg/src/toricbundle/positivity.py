"""Positivity of toric vector bundles: curve splittings, nef/ample, global
generation, very ampleness, bigness and the branched-cover concavity test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import fan as fanmod
from .bundle import BundleError, ToricVectorBundle, expanded_characters
from .fan import Wall
from .linalg import Echelon, intersect, intersect_all, span_of_spaces, sum_spaces
from .matroid import Matroid, matroid
from .polyhedra import vertex_edges


# Curve splitting


@dataclass(frozen=True)
class CurveSplitting:
    """Splitting type of ``E`` on the invariant curve of ``wall``.

    Each pair satisfies ``u_left - u_right = degree * wall.normal``.
    """

    wall: Wall
    pairs: tuple  # tuple[(u_left, u_right, degree), ...]

    @property
    def degrees(self) -> tuple:
        return tuple(sorted(d for _, _, d in self.pairs))


def _dim_mod(A, B, K) -> int:
    """``dim((A + K) cap (B + K)) - dim K``."""
    return intersect(sum_spaces(A, K), sum_spaces(B, K)).dim - K.dim


def curve_splitting(E: ToricVectorBundle, wall: Wall) -> CurveSplitting:
    """Pair the characters of the two cones of ``wall``.

    Pairing is done through the filtrations rather than by restriction alone: for
    each multi-index ``c`` on the rays of ``tau`` the graded piece
    ``F_c / F_>c`` carries two induced filtrations (from the outer rays of the
    two cones); its bigraded dimensions give the pairs ``(alpha, beta)`` and the
    degree ``alpha + beta - sum_i b_i c_i`` where ``left_ray + right_ray = sum b_i tau_i``.
    """
    fan = E.fan
    r = E.rank
    tau = wall.tau
    b = fanmod.wall_relation(fan, wall)
    fL, fR = E.filtrations[wall.left_ray], E.filtrations[wall.right_ray]
    tfilts = [E.filtrations[i] for i in tau]
    left_cone, right_cone = fan.max_cones[wall.left], fan.max_cones[wall.right]
    pairs = []
    for c in itertools.product(*[f.jumps for f in tfilts]):
        Fc = intersect_all([f.at(v) for f, v in zip(tfilts, c)], r)
        if Fc.is_zero():
            continue
        K = span_of_spaces([intersect(Fc, f.at(v + 1)) for f, v in zip(tfilts, c)], r)
        if Fc.dim == K.dim:
            continue
        A = {a: intersect(Fc, fL.at(a)) for a in fL.jumps + (fL.jumps[-1] + 1,)}
        B = {x: intersect(Fc, fR.at(x)) for x in fR.jumps + (fR.jumps[-1] + 1,)}

        def d(a, x):
            return _dim_mod(A[a] if a in A else intersect(Fc, fL.at(a)), B[x] if x in B else intersect(Fc, fR.at(x)), K)

        values = dict(zip(tau, c))
        for alpha in fL.jumps:
            for beta in fR.jumps:
                m = d(alpha, beta) - d(alpha + 1, beta) - d(alpha, beta + 1) + d(alpha + 1, beta + 1)
                if m < 0:
                    raise BundleError("negative bigraded multiplicity: filtrations are incompatible")
                if m == 0:
                    continue
                lv = [values[i] if i in values else alpha for i in left_cone]
                rv = [values[i] if i in values else beta for i in right_cone]
                uL = fanmod.character_on_cone(fan, left_cone, lv)
                uR = fanmod.character_on_cone(fan, right_cone, rv)
                deg = alpha + beta - sum(bi * ci for bi, ci in zip(b, c))
                pairs.extend([(uL, uR, deg)] * m)
    _check_pairs(E, wall, pairs)
    restr = lambda u: tuple(fanmod.pairing(u, fan.rays[i]) for i in tau)  # noqa: E731
    pairs.sort(key=lambda p: (restr(p[0]), p[2], p[0], p[1]))
    return CurveSplitting(wall, tuple(pairs))


def _check_pairs(E: ToricVectorBundle, wall: Wall, pairs) -> None:
    lefts = sorted(p[0] for p in pairs)
    rights = sorted(p[1] for p in pairs)
    if lefts != sorted(expanded_characters(E, wall.left)) or rights != sorted(expanded_characters(E, wall.right)):
        raise BundleError(f"wall {wall.tau}: characters could not be matched")
    for uL, uR, deg in pairs:
        if tuple(a - b for a, b in zip(uL, uR)) != tuple(deg * x for x in wall.normal):
            raise BundleError(f"wall {wall.tau}: matched characters differ off the normal")


def curve_splittings(E: ToricVectorBundle) -> list[CurveSplitting]:
    key = ("curves",)
    if key not in E._memo:
        E._memo[key] = [curve_splitting(E, w) for w in fanmod.walls(E.fan)]
    return E._memo[key]


def is_nef(E: ToricVectorBundle) -> bool:
    return all(d >= 0 for cs in curve_splittings(E) for d in cs.degrees)


def is_ample(E: ToricVectorBundle) -> bool:
    return all(d > 0 for cs in curve_splittings(E) for d in cs.degrees)


# Global generation and very ampleness


@dataclass(frozen=True)
class ConeFailure:
    cone_index: int
    cone: tuple
    characters: tuple
    # per character: ground indices whose polytope contains it
    candidates: tuple
    # per (character, ground index): violated inequalities (ray index, <u,rho>, bound)
    violations: tuple


@dataclass(frozen=True)
class GGResult:
    verdict: bool
    witnesses: tuple  # per cone: tuple of (u, ground index); empty for failing cones
    failures: tuple  # tuple[ConeFailure, ...]

    def __bool__(self) -> bool:
        return self.verdict


def _search(chars: Sequence, admissible, vectors: Sequence, dim: int):
    """Injective assignment char -> ground index, admissible and linearly independent."""
    order = sorted(range(len(chars)), key=lambda i: (len(admissible[i]), i))
    chosen: dict = {}

    def rec(pos, ech_vectors):
        if pos == len(order):
            return True
        i = order[pos]
        for g in admissible[i]:
            if g in chosen.values():
                continue
            ech = Echelon(dim, ech_vectors)
            if not ech.add(vectors[g]):
                continue
            chosen[i] = g
            if rec(pos + 1, ech_vectors + [vectors[g]]):
                return True
            del chosen[i]
        return False

    if rec(0, []):
        return tuple((chars[i], chosen[i]) for i in range(len(chars)))
    return None


def _violations(E: ToricVectorBundle, M: Matroid, u) -> tuple:
    out = []
    for g, e in enumerate(M.ground):
        bad = []
        for i, (normal, bound) in enumerate(e.polytope.inequalities):
            v = fanmod.pairing(u, normal)
            if v > bound:
                bad.append((i, v, bound))
        out.append((g, tuple(bad)))
    return tuple(out)


def _positivity_search(E: ToricVectorBundle, admissible_fn) -> GGResult:
    M = matroid(E)
    vectors = M.vectors
    witnesses, failures = [], []
    for ci, cone in enumerate(E.fan.max_cones):
        chars = expanded_characters(E, ci)
        admissible = [[g for g in range(len(vectors)) if admissible_fn(ci, u, g)] for u in chars]
        found = _search(chars, admissible, vectors, E.rank)
        if found is None:
            witnesses.append(())
            failures.append(
                ConeFailure(
                    ci,
                    cone,
                    tuple(chars),
                    tuple(tuple(a) for a in admissible),
                    tuple((u, _violations(E, M, u)) for u in chars),
                )
            )
        else:
            witnesses.append(found)
    return GGResult(not failures, tuple(witnesses), tuple(failures))


def is_globally_generated(E: ToricVectorBundle) -> GGResult:
    """Per cone, an independent system ``e_i`` of ground vectors with ``u_i in P_{e_i}``."""
    M = matroid(E)
    return _positivity_search(E, lambda ci, u, g: M.ground[g].polytope.contains(u))


def dual_cone_generators(fan: fanmod.Fan, ci: int) -> set:
    """Primitive generators of ``-sigma^vee``, the edge cone of ``P_D`` at ``m_sigma``."""
    cone = fan.max_cones[ci]
    out = set()
    for pos in range(len(cone)):
        vals = [0] * len(cone)
        vals[pos] = -1
        out.add(tuple(int(x) for x in fanmod.character_on_cone(fan, cone, vals)))
    return out


def is_very_ample(E: ToricVectorBundle) -> GGResult:
    """Global generation where additionally, at each witness, ``u_i`` is a vertex of
    ``P_{e_i}`` whose edge directions are exactly the generators of the dual cone
    (with ``P_D = {<x, rho> <= a_rho}`` the edges point along ``-sigma^vee``)."""
    M = matroid(E)
    gens = {ci: dual_cone_generators(E.fan, ci) for ci in range(len(E.fan.max_cones))}

    def ok(ci, u, g):
        P = M.ground[g].polytope
        if not P.contains(u):
            return False
        edges = vertex_edges(P, u)
        return edges is not None and set(edges) == gens[ci]

    return _positivity_search(E, ok)


# Bigness


@dataclass(frozen=True)
class BigResult:
    verdict: str  # "big" or "unknown"
    degree: int | None = None
    vector: tuple | None = None
    divisor: tuple | None = None
    normal_form: tuple | None = None


def is_big(E: ToricVectorBundle, k_max: int) -> BigResult:
    """First ground vector of a seeded ``M(S^k E)``, ``k <= k_max``, with a
    full-dimensional polytope; ``unknown`` if there is none up to ``k_max``."""
    from .cox import frak_M
    from .polyhedra import is_full_dimensional

    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    G = frak_M(E, k_max)
    for level in G.levels:
        for e in level.matroid.ground:
            if is_full_dimensional(e.polytope):
                return BigResult("big", level.degree, e.vector, e.divisor, fanmod.normal_form(E.fan, e.divisor))
    return BigResult("unknown")


# Branched cover


@dataclass(frozen=True)
class BranchedCover:
    """Sheets are ``(cone index, character)``, one per character with multiplicity;
    ``gluings[w]`` lists ``(left sheet, right sheet)`` for wall ``w``."""

    walls: tuple
    sheets: tuple  # tuple[(cone index, u), ...]
    gluings: tuple  # per wall: tuple[(left sheet index, right sheet index), ...]

    def psi(self, sheet: int, v: Sequence) -> int:
        return fanmod.pairing(self.sheets[sheet][1], v)


def branched_cover(E: ToricVectorBundle) -> BranchedCover:
    sheets = []
    by_cone: dict = {}
    for ci in range(len(E.fan.max_cones)):
        for u in expanded_characters(E, ci):
            by_cone.setdefault(ci, []).append(len(sheets))
            sheets.append((ci, u))
    gluings = []
    ws = fanmod.walls(E.fan)
    for w in ws:
        free_l = list(by_cone[w.left])
        free_r = list(by_cone[w.right])
        glue = []
        for uL, uR, _ in curve_splitting(E, w).pairs:
            sl = next(s for s in free_l if sheets[s][1] == uL)
            sr = next(s for s in free_r if sheets[s][1] == uR)
            free_l.remove(sl)
            free_r.remove(sr)
            glue.append((sl, sr))
        gluings.append(tuple(glue))
    return BranchedCover(tuple(ws), tuple(sheets), tuple(gluings))


@dataclass(frozen=True)
class Concavity:
    nef_like: bool
    strict: bool


def concavity_check(E: ToricVectorBundle, cover: BranchedCover) -> Concavity:
    """Wall-local concavity of ``Psi_E``: for glued sheets across a wall, the
    linear form of the left sheet extended past the wall must not exceed ``Psi_E``
    at a point of the right cone off the wall (and symmetrically)."""
    rays = E.fan.rays
    nef, strict = True, True
    for w, glue in zip(cover.walls, cover.gluings):
        for sl, sr in glue:
            for here, there, probe in ((sl, sr, rays[w.right_ray]), (sr, sl, rays[w.left_ray])):
                gap = cover.psi(there, probe) - cover.psi(here, probe)
                if gap < 0:
                    nef = False
                if gap <= 0:
                    strict = False
    return Concavity(nef, strict)
