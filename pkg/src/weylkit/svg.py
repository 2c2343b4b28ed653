"""Static SVG figures for rank-2 scenes.

Coordinates are decimal approximations of the exact data and are only
illustrative; every authoritative value lives in the JSON output.  Rendering
is deterministic for a fixed input, so figures are byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from .root_system import RootSystem
from .scalars import NFElem


class SvgError(ValueError):
    pass


def _to_float(v) -> float:
    if isinstance(v, NFElem):
        return v.to_float()
    return float(Fraction(v)) if not isinstance(v, float) else v


def embedding(rs: RootSystem) -> tuple:
    """Euclidean images of the two simple roots (Cholesky of the Gram matrix)."""
    if rs.rank != 2:
        raise SvgError("figures are drawn for rank-2 systems only")
    g11 = _to_float(rs.gram[0][0])
    g12 = _to_float(rs.gram[0][1])
    g22 = _to_float(rs.gram[1][1])
    a1 = (math.sqrt(g11), 0.0)
    a2 = (g12 / math.sqrt(g11), math.sqrt(g22 - g12 * g12 / g11))
    return a1, a2


def to_xy(rs: RootSystem, pt) -> tuple[float, float]:
    a1, a2 = embedding(rs)
    c1, c2 = (_to_float(c) for c in pt)
    return (c1 * a1[0] + c2 * a2[0], c1 * a1[1] + c2 * a2[1])


@dataclass
class Scene:
    """What to draw: everything optional, everything already in model coordinates."""

    orbit: List[tuple] = field(default_factory=list)
    hull_shade: List[tuple] = field(default_factory=list)
    lattice: List[tuple] = field(default_factory=list)
    path_points: List[tuple] = field(default_factory=list)
    draw_walls: bool = True
    title: str = ""


def _fmt(v: float) -> str:
    out = f"{v:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _convex_hull(points: List[tuple]) -> List[tuple]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _clip_line(n: tuple, k: float, box: tuple) -> tuple | None:
    """Segment of {q . n = k} inside the box (xmin, ymin, xmax, ymax)."""
    xmin, ymin, xmax, ymax = box
    pts = []
    nx, ny = n
    for x in (xmin, xmax):
        if abs(ny) > 1e-12:
            y = (k - nx * x) / ny
            if ymin - 1e-9 <= y <= ymax + 1e-9:
                pts.append((x, y))
    for y in (ymin, ymax):
        if abs(nx) > 1e-12:
            x = (k - ny * y) / nx
            if xmin - 1e-9 <= x <= xmax + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    return uniq[0], uniq[1]


def emit_svg(rs: RootSystem, scene: Scene) -> str:
    """Render the scene; valid (and empty-but-valid for an empty scene) SVG 1.1."""
    if rs.rank != 2:
        raise SvgError("figures are drawn for rank-2 systems only")
    xy_orbit = [to_xy(rs, p) for p in scene.orbit]
    xy_shade = [to_xy(rs, p) for p in scene.hull_shade]
    xy_latt = [to_xy(rs, p) for p in scene.lattice]
    xy_path = [to_xy(rs, p) for p in scene.path_points]
    everything = xy_orbit + xy_shade + xy_latt + xy_path + [(0.0, 0.0)]
    span = max(max(abs(x), abs(y)) for x, y in everything)
    span = max(span, 1.0) * 1.25
    box = (-span, -span, span, span)
    size = 640
    scale = size / (2 * span)

    def sx(x: float) -> str:
        return _fmt((x + span) * scale)

    def sy(y: float) -> str:
        return _fmt((span - y) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<!-- decimal coordinates are approximate; exact data lives in the JSON ({scene.title}) -->",
    ]
    if scene.draw_walls:
        levels = int(math.ceil(span)) + 1
        for alpha in rs.positive_roots:
            n = to_xy(rs, alpha)
            nn = n[0] * n[0] + n[1] * n[1]
            for k in range(-levels * 3, levels * 3 + 1):
                seg = _clip_line(n, float(k), box)
                if seg is None:
                    continue
                (x1, y1), (x2, y2) = seg
                width = "1.0" if k == 0 else "0.4"
                out.append(
                    f'<line x1="{sx(x1)}" y1="{sy(y1)}" x2="{sx(x2)}" y2="{sy(y2)}" '
                    f'stroke="#b0b0c8" stroke-width="{width}"/>'
                )
    if xy_shade:
        hull = _convex_hull(xy_shade)
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in hull)
        out.append(f'<polygon points="{pts}" fill="#ffd27f" fill-opacity="0.45" stroke="none"/>')
    for x, y in xy_latt:
        out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="3.0" fill="#406080"/>')
    if xy_path:
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in xy_path)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="#c03020" stroke-width="2.5"/>'
        )
    for x, y in xy_orbit:
        out.append(
            f'<circle cx="{sx(x)}" cy="{sy(y)}" r="5.0" fill="#903010" stroke="#400800"/>'
        )
    out.append(f'<circle cx="{sx(0.0)}" cy="{sy(0.0)}" r="4.0" fill="#000000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
