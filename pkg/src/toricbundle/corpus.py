"""Shipped example bundles and seeded random generators."""

from __future__ import annotations

import random
from importlib import resources

from . import bundlefile
from .bundle import Filtration, ToricVectorBundle, split_bundle
from .fan import Fan, make_fan
from .linalg import full_space, rank, rref
from .matroid import all_circuits, matroid

NAMES = ("tp2", "p1p1_bignominkowski", "example_big", "surface_k")


def corpus_text(name: str) -> str:
    return resources.files("toricbundle").joinpath("corpus", f"{name}.bundle").read_text(encoding="utf-8")


def load(name: str, **params) -> ToricVectorBundle:
    E = bundlefile.parse(corpus_text(name), params or None)
    if name == "example_big":
        check_example_big_generic(E)
    return E


def tp2() -> ToricVectorBundle:
    return load("tp2")


def bignominkowski() -> ToricVectorBundle:
    return load("p1p1_bignominkowski")


def example_big() -> ToricVectorBundle:
    return load("example_big")


def surface(k: int) -> ToricVectorBundle:
    return load("surface_k", k=k)


def corpus_bundles() -> dict:
    """The corpus with the surface family at ``k = 1, 2, 3``."""
    out = {"tp2": tp2(), "p1p1_bignominkowski": bignominkowski(), "example_big": example_big()}
    for k in (1, 2, 3):
        out[f"surface_k{k}"] = surface(k)
    return out


class GenericityError(ValueError):
    pass


def check_example_big_generic(E: ToricVectorBundle) -> None:
    """The six matroid vectors ``v_i, l_ij`` must have only the three forced
    dependent triples ``{v_i, l_ij, l_ik}`` (all lying in ``W_i``)."""
    M = matroid(E)
    if len(M.ground) != 6:
        raise GenericityError(f"expected 6 matroid vectors, found {len(M.ground)}")
    triples = [c for c, _ in all_circuits(M) if len(c) == 3]
    small = [c for c, _ in all_circuits(M, max_size=2)]
    if small or len(triples) != 3:
        raise GenericityError("vectors of the rank 3 example are not in general position")
    for c in triples:
        if rank([M.ground[i].vector for i in c], 3) != 2:
            raise GenericityError("unexpected dependency")


# Fans


def p1() -> Fan:
    return make_fan([(1,), (-1,)], [(0,), (1,)])


def p2() -> Fan:
    return make_fan([(-1, -1), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)])


def p1p1() -> Fan:
    return make_fan([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (1, 2), (1, 3), (0, 3)])


def surface_fan() -> Fan:
    return surface(1).fan


def corpus_fans() -> dict:
    return {"P1": p1(), "P2": p2(), "P1xP1": p1p1(), "surface": surface_fan()}


def split_p1(a: int, b: int) -> ToricVectorBundle:
    """``O(a) + O(b)`` on the projective line, twisting along the ray ``(1)``."""
    return split_bundle(p1(), [(a, 0), (b, 0)])


# Random data (any filtrations are compatible in dimension at most two)


def random_filtration(rng: random.Random, r: int, span: int = 2) -> Filtration:
    """A random flag of spans of random integer vectors with random increasing jumps."""
    dims = sorted(rng.sample(range(1, r), rng.randint(0, r - 1)), reverse=True) if r > 1 else []
    while True:
        vecs = [tuple(rng.randint(-span, span) for _ in range(r)) for _ in range(r)]
        if rank(vecs, r) == r:
            break
    j = rng.randint(-2, 1)
    steps = [(j, full_space(r))]
    for d in dims:
        j += rng.randint(1, 2)
        steps.append((j, rref(vecs[:d], r)))
    return Filtration(r, tuple(steps))


def random_bundle(fan: Fan, r: int, seed: int) -> ToricVectorBundle:
    if fan.dim > 2:
        raise ValueError("random bundles are only generated on curves and surfaces")
    rng = random.Random(seed)
    return ToricVectorBundle(fan, r, tuple(random_filtration(rng, r) for _ in fan.rays))


def random_divisor(fan: Fan, seed: int, span: int = 3) -> tuple:
    rng = random.Random(seed)
    return tuple(rng.randint(-span, span) for _ in fan.rays)
