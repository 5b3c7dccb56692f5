"""Fans, torus-invariant divisors, support data and polytopes.

Sign convention: the Cartier character of ``D = sum a_rho D_rho`` on a maximal
cone satisfies ``<m_sigma, rho> = +a_rho``, and ``P_D = {x : <x, rho> <= a_rho}``.
With this convention nef means concave support function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .linalg import express_in, null_space, rank, scale_to_integers
from .polyhedra import HPolytope

Divisor = tuple  # integer coefficient per ray, in ray order


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    rays: tuple  # tuple[tuple[int, ...], ...]
    max_cones: tuple  # tuple[tuple[int, ...], ...], each sorted

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    @property
    def nrays(self) -> int:
        return len(self.rays)


def make_fan(rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]) -> Fan:
    if not rays:
        raise FanError("fan has no rays")
    n = len(rays[0])
    rr = []
    for r in rays:
        if len(r) != n:
            raise FanError(f"ray {tuple(r)} has wrong length")
        rr.append(tuple(int(x) for x in r))
    cc = []
    for c in cones:
        idx = tuple(sorted(int(i) for i in c))
        for i in idx:
            if not 0 <= i < len(rr):
                raise FanError(f"unknown ray index {i}")
        if len(set(idx)) != len(idx):
            raise FanError(f"cone {idx} repeats a ray")
        cc.append(idx)
    return Fan(tuple(rr), tuple(cc))


@dataclass(frozen=True)
class FanReport:
    smooth: bool
    complete: bool


def _det(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _check_rays(fan: Fan) -> None:
    seen = set()
    for r in fan.rays:
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            raise FanError(f"ray {r} is not primitive")
        if r in seen:
            raise FanError(f"duplicate ray {r}")
        seen.add(r)


def _simplicial_full(fan: Fan) -> bool:
    n = fan.dim
    return all(len(c) == n and rank([fan.rays[i] for i in c], n) == n for c in fan.max_cones)


def _side(normal: Sequence, v: Sequence) -> int:
    s = sum(a * b for a, b in zip(normal, v))
    return (s > 0) - (s < 0)


def _facet_normal(fan: Fan, tau: Sequence[int]) -> tuple[int, ...]:
    ker = null_space([fan.rays[i] for i in tau], fan.dim)
    if len(ker) != 1:
        raise FanError(f"cone {tuple(tau)} is not a facet")
    return scale_to_integers(ker[0])


def _facet_table(fan: Fan) -> dict:
    table: dict = {}
    for ci, cone in enumerate(fan.max_cones):
        for tau in itertools.combinations(cone, len(cone) - 1):
            table.setdefault(tau, []).append(ci)
    return table


def _generic_point(fan: Fan) -> tuple[int, ...]:
    n = fan.dim
    hyperplanes = [_facet_normal(fan, tau) for tau in _facet_table(fan)]
    t = 7
    while True:
        p = tuple(t**i for i in range(n))
        if all(_side(h, p) != 0 for h in hyperplanes):
            return p
        t += 1


def _in_interior(fan: Fan, cone: Sequence[int], p: Sequence) -> bool:
    coeffs = express_in(p, [fan.rays[i] for i in cone])
    return all(c > 0 for c in coeffs)


def validate_fan(fan: Fan) -> FanReport:
    """Smoothness and completeness of a fan of full-dimensional simplicial cones."""
    _check_rays(fan)
    n = fan.dim
    if not _simplicial_full(fan):
        return FanReport(smooth=False, complete=False)
    smooth = all(abs(_det([fan.rays[i] for i in c])) == 1 for c in fan.max_cones)
    return FanReport(smooth=smooth, complete=_complete(fan, n))


def _complete(fan: Fan, n: int) -> bool:
    table = _facet_table(fan)
    for tau, owners in table.items():
        if len(owners) != 2:
            return False
        normal = _facet_normal(fan, tau)
        sides = []
        for ci in owners:
            extra = [i for i in fan.max_cones[ci] if i not in tau][0]
            sides.append(_side(normal, fan.rays[extra]))
        if sides[0] * sides[1] != -1:
            return False
    # no boundary facets and locally two-sided; a generic point then meets exactly one cone
    p = _generic_point(fan)
    return sum(_in_interior(fan, c, p) for c in fan.max_cones) == 1


def require_smooth_complete(fan: Fan) -> None:
    rep = validate_fan(fan)
    if not rep.smooth:
        raise FanError("fan is not smooth")
    if not rep.complete:
        raise FanError("fan is not complete")


@dataclass(frozen=True)
class Wall:
    """Codimension-one cone ``tau`` between maximal cones ``left`` and ``right``.

    ``normal`` is primitive, vanishes on ``tau`` and is positive on ``left``.
    ``left_ray``/``right_ray`` are the rays of the two cones outside ``tau``.
    """

    tau: tuple
    left: int
    right: int
    normal: tuple
    left_ray: int
    right_ray: int


def walls(fan: Fan) -> list[Wall]:
    rep = validate_fan(fan)
    if not rep.complete:
        raise FanError("fan is not complete")
    out = []
    for tau, owners in sorted(_facet_table(fan).items()):
        left, right = sorted(owners)
        lray = [i for i in fan.max_cones[left] if i not in tau][0]
        rray = [i for i in fan.max_cones[right] if i not in tau][0]
        normal = _facet_normal(fan, tau)
        if _side(normal, fan.rays[lray]) < 0:
            normal = tuple(-x for x in normal)
        out.append(Wall(tau, left, right, normal, lray, rray))
    return out


def wall_relation(fan: Fan, wall: Wall) -> tuple[int, ...]:
    """Coefficients ``b`` with ``left_ray + right_ray = sum_i b_i tau_i``."""
    if not wall.tau:
        return ()
    target = [a + b for a, b in zip(fan.rays[wall.left_ray], fan.rays[wall.right_ray])]
    # the sum lies in span(tau) on a smooth fan
    coeffs = express_in(target, [fan.rays[i] for i in wall.tau])
    return tuple(int(c) for c in coeffs)


def character_on_cone(fan: Fan, cone: Sequence[int], values: Sequence) -> tuple:
    """The ``u`` with ``<u, rho_i> = values[i]`` for the rays of ``cone`` (in cone order)."""
    n = fan.dim
    rows = [[Fraction(x) for x in fan.rays[i]] + [Fraction(v)] for i, v in zip(cone, values)]
    # solve R u = values with R the ray matrix
    a = rows
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    u = [a[i][n] for i in range(n)]
    return tuple(int(x) if x.denominator == 1 else x for x in u)


def cartier_data(fan: Fan, D: Divisor) -> list[tuple]:
    """Character ``m_sigma`` per maximal cone, in ``fan.max_cones`` order."""
    return [character_on_cone(fan, c, [D[i] for i in c]) for c in fan.max_cones]


def polytope(fan: Fan, D: Divisor) -> HPolytope:
    return HPolytope(fan.dim, tuple((fan.rays[i], int(D[i])) for i in range(fan.nrays)))


def pairing(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class DivisorPositivity:
    nef: bool
    ample: bool


def divisor_positivity(fan: Fan, D: Divisor) -> DivisorPositivity:
    nef, ample = True, True
    for cone, m in zip(fan.max_cones, cartier_data(fan, D)):
        for i, r in enumerate(fan.rays):
            if i in cone:
                continue
            v = pairing(m, r)
            if v > D[i]:
                nef = False
            if v >= D[i]:
                ample = False
    return DivisorPositivity(nef, ample)


def intersection_number(fan: Fan, D: Divisor, wall: Wall) -> int:
    """``D . C`` for the invariant curve of ``wall``: ``<m_left - m_right, normal>``."""
    ms = cartier_data(fan, D)
    diff = [a - b for a, b in zip(ms[wall.left], ms[wall.right])]
    # m_left - m_right vanishes on tau, so it is a multiple of the primitive normal
    k = next(i for i, x in enumerate(wall.normal) if x != 0)
    return int(Fraction(diff[k]) / wall.normal[k])


def normal_form(fan: Fan, D: Divisor) -> tuple:
    """Representative of the linear-equivalence class of ``D``.

    Subtracts the principal divisor of the Cartier character on the maximal cone
    whose sorted ray indices are lexicographically largest, so the coefficients on
    those rays become zero.
    """
    ci = max(range(len(fan.max_cones)), key=lambda i: fan.max_cones[i])
    m = cartier_data(fan, D)[ci]
    return tuple(int(D[i] - pairing(m, r)) for i, r in enumerate(fan.rays))


def zero_divisor(fan: Fan) -> Divisor:
    return (0,) * fan.nrays


def add_divisors(*ds: Divisor) -> Divisor:
    return tuple(sum(x) for x in zip(*ds))


def scale_divisor(k: int, D: Divisor) -> Divisor:
    return tuple(k * x for x in D)
