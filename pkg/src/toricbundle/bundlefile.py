"""Reading and writing bundle description files.

Grammar (EBNF; ``#`` starts a comment, blank lines are ignored)::

    file        = header, rays, cones, { filtration } ;
    header      = { "dim" INT | "rank" INT | "param" NAME "=" INT } ;
    rays        = "rays", NL, { vector, NL }, "end" ;
    cones       = "cones", NL, { INT, { INT }, NL }, "end" ;
    filtration  = "filtration", INT, NL, { entry, NL }, "end" ;
    entry       = expr, ":", space ;
    space       = "full" | "zero" | row, { ";", row } ;
    row         = rational, { rational } ;
    rational    = [ "-" ], INT, [ "/", INT ] ;
    expr        = term, { ("+" | "-"), term } ;
    term        = [ "-" ], ( INT | INT, [ "*" ], NAME | NAME ) ;

A filtration entry ``s : V`` means ``E(j) = V`` for ``j >= s`` up to the next
entry.  The first entry must be ``full`` and the last one ``zero``.  Vectors in
``rays`` are integer rows; ``param`` values can be overridden when loading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from .bundle import BundleError, Filtration, IncompatibleFiltrationError, ToricVectorBundle, validate_bundle
from .fan import Fan, FanError, validate_fan
from .linalg import full_space, rref, zero_space

CODES = {
    "E001": "syntax error",
    "E002": "missing or repeated header",
    "E003": "vector has the wrong length",
    "E004": "ray is not primitive",
    "E005": "duplicate ray",
    "E006": "unknown ray index",
    "E007": "filtration jumps not increasing",
    "E008": "filtration is not decreasing",
    "E009": "filtration does not start at the full space",
    "E010": "filtration does not terminate",
    "E011": "missing filtration",
    "E012": "bad number",
    "E013": "incompatible filtrations",
    "E014": "fan is not smooth and complete",
    "E015": "unknown parameter",
    "E016": "unterminated block",
}


class ParseError(ValueError):
    def __init__(self, code: str, line: int | None, message: str):
        where = f" line {line}" if line is not None else ""
        super().__init__(f"{code}{where}: {message}")
        self.code = code
        self.line = line


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_]\w*)?\s*")


def eval_expr(text: str, params: Mapping[str, int], line: int | None = None) -> int:
    """Evaluate an affine integer expression such as ``6k-1`` or ``3*k - 6``."""
    s = text.strip()
    if not s:
        raise ParseError("E001", line, "empty expression")
    pos, total, first = 0, 0, True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError("E001", line, f"cannot read expression {text!r}")
        sign, digits, name = m.groups()
        if not first and not sign:
            raise ParseError("E001", line, f"cannot read expression {text!r}")
        if not digits and not name:
            raise ParseError("E001", line, f"cannot read expression {text!r}")
        value = int(digits) if digits else 1
        if name:
            if name not in params:
                raise ParseError("E015", line, f"unknown parameter {name!r}")
            value *= params[name]
        total += -value if sign == "-" else value
        pos, first = m.end(), False
    return total


def _rational(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError("E012", line, f"bad rational {tok!r}") from None


def _integer(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError("E012", line, f"bad integer {tok!r}") from None


@dataclass
class _Raw:
    dim: int | None = None
    rank: int | None = None
    params: dict | None = None
    rays: list | None = None
    cones: list | None = None
    filtrations: dict | None = None


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body


def parse(text: str, params: Mapping[str, int] | None = None, validate: bool = True) -> ToricVectorBundle:
    raw = _Raw(params={}, filtrations={})
    it = iter(_lines(text))
    filt_lines: dict = {}
    for no, body in it:
        head, _, rest = body.partition(" ")
        rest = rest.strip()
        if head in ("dim", "rank"):
            if getattr(raw, head) is not None:
                raise ParseError("E002", no, f"repeated {head}")
            value = _integer(rest, no)
            if value < 1:
                raise ParseError("E002", no, f"{head} must be positive")
            setattr(raw, head, value)
        elif head == "param":
            m = re.fullmatch(r"([A-Za-z_]\w*)\s*=\s*(-?\d+)", rest)
            if not m:
                raise ParseError("E001", no, "expected 'param NAME = INT'")
            raw.params[m.group(1)] = int(m.group(2))
        elif head == "rays" and not rest:
            if raw.rays is not None:
                raise ParseError("E002", no, "repeated rays block")
            raw.rays = [(n, b) for n, b in _block(it, no)]
        elif head == "cones" and not rest:
            if raw.cones is not None:
                raise ParseError("E002", no, "repeated cones block")
            raw.cones = [(n, b) for n, b in _block(it, no)]
        elif head == "filtration":
            idx = _integer(rest, no)
            if idx in filt_lines:
                raise ParseError("E002", no, f"repeated filtration {idx}")
            filt_lines[idx] = (no, list(_block(it, no)))
        else:
            raise ParseError("E001", no, f"unexpected {body!r}")
    if params:
        for k, v in params.items():
            raw.params[k] = int(v)
    if raw.dim is None or raw.rank is None:
        raise ParseError("E002", None, "dim and rank are required")
    if raw.rays is None or raw.cones is None:
        raise ParseError("E002", None, "rays and cones blocks are required")
    fan = _build_fan(raw)
    filts = []
    for i in range(len(fan.rays)):
        if i not in filt_lines:
            raise ParseError("E011", None, f"no filtration for ray {i}")
    for idx, (no, _) in filt_lines.items():
        if not 0 <= idx < len(fan.rays):
            raise ParseError("E006", no, f"unknown ray index {idx}")
    for i in range(len(fan.rays)):
        no, entries = filt_lines[i]
        filts.append(_build_filtration(raw.rank, entries, raw.params, no))
    E = ToricVectorBundle(fan, raw.rank, tuple(filts))
    if validate:
        try:
            validate_bundle(E)
        except IncompatibleFiltrationError as exc:
            raise ParseError("E013", None, str(exc)) from None
    return E


def _block(it, start: int):
    for no, body in it:
        if body == "end":
            return
        yield no, body
    raise ParseError("E016", start, "block is missing 'end'")


def _build_fan(raw: _Raw) -> Fan:
    rays = []
    seen = {}
    for no, body in raw.rays:
        vec = tuple(_integer(t, no) for t in body.split())
        if len(vec) != raw.dim:
            raise ParseError("E003", no, f"ray {vec} should have {raw.dim} entries")
        g = 0
        for x in vec:
            g = gcd(g, x)
        if g != 1:
            raise ParseError("E004", no, f"ray {vec} is not primitive")
        if vec in seen:
            raise ParseError("E005", no, f"ray {vec} repeats line {seen[vec]}")
        seen[vec] = no
        rays.append(vec)
    cones = []
    for no, body in raw.cones:
        idx = tuple(_integer(t, no) for t in body.split())
        for i in idx:
            if not 0 <= i < len(rays):
                raise ParseError("E006", no, f"unknown ray index {i}")
        cones.append(tuple(sorted(idx)))
    fan = Fan(tuple(rays), tuple(cones))
    try:
        rep = validate_fan(fan)
    except FanError as exc:
        raise ParseError("E014", None, str(exc)) from None
    if not (rep.smooth and rep.complete):
        raise ParseError("E014", None, f"fan is {'smooth' if rep.smooth else 'not smooth'} and "
                                       f"{'complete' if rep.complete else 'not complete'}")
    return fan


def _build_filtration(rank: int, entries, params, start_line: int) -> Filtration:
    if not entries:
        raise ParseError("E010", start_line, "empty filtration")
    parsed = []
    for no, body in entries:
        if ":" not in body:
            raise ParseError("E001", no, "expected 'jump : space'")
        left, right = body.split(":", 1)
        j = eval_expr(left, params, no)
        right = right.strip()
        if right == "full":
            V = full_space(rank)
        elif right == "zero":
            V = zero_space(rank)
        else:
            rows = []
            for chunk in right.split(";"):
                row = [_rational(t, no) for t in chunk.split()]
                if len(row) != rank:
                    raise ParseError("E003", no, f"row has {len(row)} entries, expected {rank}")
                rows.append(row)
            V = rref(rows, rank)
        if parsed and j <= parsed[-1][1]:
            raise ParseError("E007", no, "jump values must increase")
        if parsed and not (V.issubspace(parsed[-1][2]) and V.dim < parsed[-1][2].dim):
            raise ParseError("E008", no, "subspace does not strictly decrease")
        parsed.append((no, j, V))
    if not parsed[0][2].is_full():
        raise ParseError("E009", parsed[0][0], "first subspace must be the full space")
    if not parsed[-1][2].is_zero():
        raise ParseError("E010", parsed[-1][0], "filtration does not terminate")
    try:
        return Filtration.from_starts(rank, [(j, V) for _, j, V in parsed])
    except BundleError as exc:
        raise ParseError("E008", start_line, str(exc)) from None


def _fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_space(V) -> str:
    if V.is_full():
        return "full"
    if V.is_zero():
        return "zero"
    return " ; ".join(" ".join(_fmt_rational(x) for x in row) for row in V.rows)


def dump(E: ToricVectorBundle, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"dim {E.fan.dim}")
    out.append(f"rank {E.rank}")
    out.append("rays")
    out.extend("  " + " ".join(str(x) for x in r) for r in E.fan.rays)
    out.append("end")
    out.append("cones")
    out.extend("  " + " ".join(str(i) for i in c) for c in E.fan.max_cones)
    out.append("end")
    for i, f in enumerate(E.filtrations):
        out.append(f"filtration {i}")
        for s, V in f.starts():
            out.append(f"  {s} : {_fmt_space(V)}")
        out.append("end")
    return "\n".join(out) + "\n"


def load(path, params: Mapping[str, int] | None = None, validate: bool = True) -> ToricVectorBundle:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), params, validate)


def save(E: ToricVectorBundle, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump(E, comment))
