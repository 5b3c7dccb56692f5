"""Command line interface: ``toricbundle <command> FILE [options]``.

Reports are JSON with sorted keys; rationals are written as ``"p/q"``.
Exit codes: 0 computed, 2 verdict unknown, 1 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bundlefile
from . import fan as fanmod
from .bundle import frobenius_pullback, h0_by_character, h0_component, local_characters, sym_power, twist
from .cox import format_relation, presentation
from .matroid import cayley_consistent, cayley_data, matroid
from .polyhedra import lattice_points, polytope_dim
from .positivity import curve_splittings, is_ample, is_big, is_globally_generated, is_nef, is_very_ample

KMAX_ENV = "TORICBUNDLE_KMAX"
EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _plain(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def render(report: dict) -> str:
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


def _kmax(args) -> int:
    if args.kmax is not None:
        return args.kmax
    env = os.environ.get(KMAX_ENV)
    if env is None:
        raise UsageError(f"--kmax is required (or set {KMAX_ENV})")
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{KMAX_ENV} must be an integer") from None


def _entry(e, i) -> dict:
    return {
        "index": i,
        "vector": list(e.vector),
        "divisor": list(e.divisor),
        "provenance": e.provenance,
        "polytope_dim": polytope_dim(e.polytope),
        "lattice_points": [list(p) for p in lattice_points(e.polytope)],
    }


def cmd_check(E, args):
    rep = fanmod.validate_fan(E.fan)
    chars = []
    for ci, cone in enumerate(E.fan.max_cones):
        chars.append({"cone": list(cone), "characters": [{"u": list(u), "multiplicity": m} for u, m in local_characters(E, ci)]})
    return {"command": "check", "rank": E.rank, "rays": E.fan.rays, "cones": E.fan.max_cones,
            "smooth": rep.smooth, "complete": rep.complete, "compatible": True, "local_characters": chars}, EXIT_OK


def cmd_parliament(E, args):
    M = matroid(E)
    report = {"command": "parliament", "entries": [_entry(e, i) for i, e in enumerate(M.ground)]}
    if args.svg:
        from .svg import render_parliament

        if E.fan.dim != 2:
            raise UsageError("--svg needs a surface")
        labels = [f"P{i}: D = {list(e.divisor)}" for i, e in enumerate(M.ground)]
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_parliament([e.polytope for e in M.ground], labels))
        report["svg"] = args.svg
    return report, EXIT_OK


def cmd_h0(E, args):
    if args.u:
        u = _int_list(args.u)
        if len(u) != E.fan.dim:
            raise UsageError(f"--u needs {E.fan.dim} entries")
        V = h0_component(E, u)
        return {"command": "h0", "u": u, "dim": V.dim, "basis": [list(r) for r in V.rows]}, EXIT_OK
    table = h0_by_character(E)
    return {"command": "h0", "h0": sum(table.values()),
            "by_character": [{"u": list(u), "dim": d} for u, d in sorted(table.items())]}, EXIT_OK


def cmd_sections(E, args):
    k = args.sym
    t = _int_list(args.twist) if args.twist else (0,) * E.fan.nrays
    if len(t) != E.fan.nrays:
        raise UsageError(f"--twist needs {E.fan.nrays} entries")
    F = twist(sym_power(E, k), t)
    table = h0_by_character(F)
    return {"command": "sections", "sym": k, "twist": t, "h0": sum(table.values()),
            "by_character": [{"u": list(u), "dim": d} for u, d in sorted(table.items())]}, EXIT_OK


def _curves(E):
    out = []
    for cs in curve_splittings(E):
        w = cs.wall
        out.append({"tau": list(w.tau), "left": list(E.fan.max_cones[w.left]), "right": list(E.fan.max_cones[w.right]),
                    "normal": list(w.normal), "degrees": list(cs.degrees),
                    "pairs": [{"u_left": list(a), "u_right": list(b), "degree": d} for a, b, d in cs.pairs]})
    return out


def cmd_curves(E, args):
    return {"command": "curves", "walls": _curves(E)}, EXIT_OK


def cmd_nef(E, args):
    return {"command": "nef", "nef": is_nef(E), "walls": _curves(E)}, EXIT_OK


def cmd_ample(E, args):
    return {"command": "ample", "ample": is_ample(E), "walls": _curves(E)}, EXIT_OK


def _gg_report(E, res, name):
    M = matroid(E)
    witnesses = []
    for ci, w in enumerate(res.witnesses):
        if w:
            witnesses.append({"cone": list(E.fan.max_cones[ci]),
                              "assignment": [{"u": list(u), "ground": g} for u, g in w]})
    failures = []
    for f in res.failures:
        rendered = []
        for u, per_ground in f.violations:
            for g, bad in per_ground:
                for ray, val, bound in bad:
                    rendered.append(f"u={list(u)}, e{g}: <u, rho_{ray}> = {val} > {bound} = a_{ray}")
        uncovered = [list(u) for u, c in zip(f.characters, f.candidates) if not c]
        failures.append({"cone": list(f.cone), "characters": [list(u) for u in f.characters],
                         "uncovered_characters": uncovered,
                         "candidates": [list(c) for c in f.candidates], "violated": rendered})
    report = {"command": name, name: res.verdict, "witnesses": witnesses, "failing_cones": failures,
              "ground": [_entry(e, i) for i, e in enumerate(M.ground)]}
    return report, EXIT_OK


def cmd_gg(E, args):
    return _gg_report(E, is_globally_generated(E), "gg")


def cmd_veryample(E, args):
    return _gg_report(E, is_very_ample(E), "veryample")


def cmd_big(E, args):
    k_max = _kmax(args)
    if k_max < 1:
        raise UsageError("--kmax must be at least 1")
    res = is_big(E, k_max)
    report = {"command": "big", "kmax": k_max, "verdict": res.verdict}
    if res.verdict == "big":
        report["witness"] = {"degree": res.degree, "vector": list(res.vector), "divisor": list(res.divisor),
                             "divisor_class": list(res.normal_form)}
        return report, EXIT_OK
    return report, EXIT_UNKNOWN


def cmd_cox(E, args):
    k_max = _kmax(args)
    if k_max < 1:
        raise UsageError("--kmax must be at least 1")
    P = presentation(E, k_max)
    st = P.status
    variables = [{"name": n, "degree": d, "base_degree": list(b)} for n, d, b in P.variables()]
    gens = [{"name": f"T{g.index}", "degree": g.degree, "vector": list(g.vector), "divisor": list(g.divisor)}
            for g in P.generators]
    rels = [{"ideal": r.kind, "degree": r.degree, "base_degree": list(r.base), "polynomial": format_relation(r)}
            for r in P.relations]
    report = {"command": "cox", "kmax": k_max, "variables": variables, "generators": gens, "relations": rels,
              "mds": {"definitive": st.definitive, "fast_path": st.fast_path,
                      "stabilized_through": st.stabilized_through, "stabilized_at": st.stabilized_at,
                      "fresh_degrees": list(st.fresh_degrees)}}
    return report, EXIT_OK if st.definitive else EXIT_UNKNOWN


def _write(E, out, comment):
    if not out:
        raise UsageError("--out is required")
    bundlefile.save(E, out, comment)


def cmd_frobenius(E, args):
    F = frobenius_pullback(E, args.k)
    _write(F, args.out, f"Frobenius pullback by {args.k}")
    return {"command": "frobenius", "k": args.k, "out": args.out, "rank": F.rank}, EXIT_OK


def cmd_sympow(E, args):
    F = sym_power(E, args.k)
    _write(F, args.out, f"symmetric power {args.k}")
    return {"command": "sympow", "k": args.k, "out": args.out, "rank": F.rank}, EXIT_OK


def cmd_cayley(E, args):
    C = cayley_data(E)
    return {"command": "cayley", "s": C.s, "lifted_rays": C.lifted_rays, "simplex_rays": C.simplex_rays,
            "divisor": C.divisor,
            "inequalities": [{"normal": list(n), "bound": b} for n, b in C.big_polytope.inequalities],
            "lattice_points": len(lattice_points(C.big_polytope)), "slices_match_parliament": cayley_consistent(E, C)}, EXIT_OK


COMMANDS = {
    "check": cmd_check, "parliament": cmd_parliament, "h0": cmd_h0, "sections": cmd_sections,
    "curves": cmd_curves, "nef": cmd_nef, "ample": cmd_ample, "gg": cmd_gg, "veryample": cmd_veryample,
    "big": cmd_big, "cox": cmd_cox, "frobenius": cmd_frobenius, "sympow": cmd_sympow, "cayley": cmd_cayley,
}


def build_parser() -> _Parser:
    p = _Parser(prog="toricbundle", description="Exact computations with toric vector bundles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="bundle description file")
        sp.add_argument("--param", action="append", default=[], metavar="NAME=INT",
                        help="override a template parameter")
        return sp

    add("check", "validate the bundle and list local characters")
    add("parliament", "matroid vectors with divisors and polytopes").add_argument("--svg", metavar="PATH")
    add("h0", "global sections by character").add_argument("--u", metavar="a,b,...")
    sp = add("sections", "sections of a twisted symmetric power")
    sp.add_argument("--sym", type=int, default=1)
    sp.add_argument("--twist", metavar="t1,...,tn")
    add("curves", "splitting types on invariant curves")
    add("nef", "nef verdict")
    add("ample", "ample verdict")
    add("gg", "global generation verdict")
    add("veryample", "very ampleness verdict")
    add("big", "bigness up to a degree bound").add_argument("--kmax", type=int)
    add("cox", "Cox ring presentation up to a degree bound").add_argument("--kmax", type=int)
    for name in ("frobenius", "sympow"):
        sp = add(name, "write the pulled back bundle" if name == "frobenius" else "write a symmetric power")
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--out", required=True)
    add("cayley", "Cayley data of the parliament")
    return p


def _params(items) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects NAME=INT, got {item!r}")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"--param expects NAME=INT, got {item!r}") from None
    return out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "k", None) is not None and args.k < 1:
            raise UsageError("--k must be at least 1")
        if args.command == "sections" and args.sym < 1:
            raise UsageError("--sym must be at least 1")
        E = bundlefile.load(args.file, _params(args.param) or None)
        report, code = COMMANDS[args.command](E, args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_ERROR
    except bundlefile.ParseError as exc:
        stderr.write(f"input error: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        stderr.write(f"input error: {exc}\n")
        return EXIT_ERROR
    stdout.write(render(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
