"""SVG 1.1 drawing of a planar parliament of polytopes."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .polyhedra import HPolytope, lattice_points, vertices_2d

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
DASHES = ("none", "6,3", "2,2", "8,3,2,3")
UNIT = 60
MARGIN = 30


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_parliament(polytopes: Sequence[HPolytope], labels: Sequence[str] | None = None) -> str:
    if any(P.dim != 2 for P in polytopes):
        raise ValueError("only planar parliaments can be drawn")
    labels = list(labels) if labels else [f"P{i}" for i in range(len(polytopes))]
    verts = [vertices_2d(P) for P in polytopes]
    points = [lattice_points(P) if v else [] for P, v in zip(polytopes, verts)]
    xs = [Fraction(0)] + [p[0] for vs in verts for p in vs]
    ys = [Fraction(0)] + [p[1] for vs in verts for p in vs]
    xmin, xmax = min(xs) - 1, max(xs) + 1
    ymin, ymax = min(ys) - 1, max(ys) + 1
    width = float(xmax - xmin) * UNIT + 2 * MARGIN
    height = float(ymax - ymin) * UNIT + 2 * MARGIN + 20 * len(polytopes)

    def sx(x):
        return float(x - xmin) * UNIT + MARGIN

    def sy(y):
        return float(ymax - y) * UNIT + MARGIN

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    # grid of lattice points in the box
    for x in range(math.floor(xmin), math.ceil(xmax) + 1):
        for y in range(math.floor(ymin), math.ceil(ymax) + 1):
            out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="1.5" fill="#bbbbbb"/>')
    for i, (vs, pts) in enumerate(zip(verts, points)):
        color = PALETTE[i % len(PALETTE)]
        dash = DASHES[i % len(DASHES)]
        style = f'fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="2.5"'
        if dash != "none":
            style += f' stroke-dasharray="{dash}"'
        if len(vs) >= 3:
            coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in vs)
            out.append(f'<polygon points="{coords}" {style}><title>{labels[i]}</title></polygon>')
        elif len(vs) == 2:
            (x1, y1), (x2, y2) = vs
            out.append(
                f'<line x1="{_fmt(sx(x1))}" y1="{_fmt(sy(y1))}" x2="{_fmt(sx(x2))}" y2="{_fmt(sy(y2))}" {style}>'
                f"<title>{labels[i]}</title></line>"
            )
        elif len(vs) == 1:
            (x1, y1), = vs
            out.append(f'<circle cx="{_fmt(sx(x1))}" cy="{_fmt(sy(y1))}" r="7" fill="none" stroke="{color}" '
                       f'stroke-width="2.5"><title>{labels[i]}</title></circle>')
        for x, y in pts:
            out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3.5" fill="{color}"/>')
        ly = float(ymax - ymin) * UNIT + 2 * MARGIN + 20 * i + 5
        state = "" if vs else " (empty)"
        out.append(f'<text x="{MARGIN}" y="{_fmt(ly)}" font-family="sans-serif" font-size="13" '
                   f'fill="{color}">{labels[i]}{state}</text>')
    ox, oy = sx(0), sy(0)
    out.append(f'<path d="M {_fmt(ox - 6)} {_fmt(oy)} L {_fmt(ox + 6)} {_fmt(oy)} M {_fmt(ox)} {_fmt(oy - 6)} '
               f'L {_fmt(ox)} {_fmt(oy + 6)}" stroke="black" stroke-width="1.5"/>')
    out.append(f'<circle cx="{_fmt(ox)}" cy="{_fmt(oy)}" r="5" fill="none" stroke="black" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
