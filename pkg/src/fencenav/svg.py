"""Plain SVG 1.1 rendering of a scene, its fences and robot trajectories."""
from __future__ import annotations

import math
from typing import Optional, Sequence

from .fences import Fence
from .scene import ExplicitScene, Scene

TRIP_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
FENCE_FILLS = ("#fdd49e", "#c6dbef", "#c7e9c0", "#dadaeb", "#fcbba1",
               "#d9d9d9", "#fee391", "#a6dba0")
OBSTACLE_FILL = "#555555"


def _f(v: float) -> str:
    v = round(float(v), 6)
    if v == 0:
        v = 0.0
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return s or "0"


def _bbox(scene: Scene, point_sets: Sequence[Sequence]) -> tuple[float, float, float, float]:
    xs = [0.0, float(scene.n)]
    ys = [0.0]
    for pts in point_sets:
        for p in pts:
            xs.append(float(p[0]))
            ys.append(float(p[1]))
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if isinstance(scene, ExplicitScene):
        pad = max(1.0, 0.05 * (y1 - y0))
        for o in scene.obstacles_in(x0, x1, y0 - pad, y1 + pad):
            y0 = min(y0, o.y_min)
            y1 = max(y1, o.y_max)
    margin = 0.02 * max(x1 - x0, y1 - y0, 1.0)
    return x0 - margin, y0 - margin, x1 + margin, y1 + margin


def render_svg(scene: Scene, trajectories: Sequence[Sequence] = (),
               fences: Sequence[Fence] = (), oracle_path: Optional[Sequence] = None,
               width: int = 800) -> str:
    """SVG text for ``scene`` with fence bands, per-trip polylines and a dashed oracle path.

    Output depends only on the inputs, so repeated calls are byte-identical.
    Two-vertex paths are drawn as ``line`` elements, longer ones as ``polyline``.
    """
    if not isinstance(scene, ExplicitScene):
        raise ValueError("render_svg needs an explicit scene")
    sets = list(trajectories) + ([oracle_path] if oracle_path else [])
    for f in fences:
        sets.append([(p.x, p.y) for p in f.posts])
    x0, y0, x1, y1 = _bbox(scene, sets)
    w, h = x1 - x0, y1 - y0
    height = max(1, int(math.ceil(width * h / w)))
    stroke = _f(max(w, h) / 400)

    def pt(p) -> str:
        return f"{_f(p[0])},{_f(-p[1])}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}">',
        f'<rect x="{_f(x0)}" y="{_f(-y1)}" width="{_f(w)}" height="{_f(h)}" fill="#ffffff"/>',
    ]
    out.append('<g id="fences">')
    for fi, f in enumerate(fences):
        fill = FENCE_FILLS[fi % len(FENCE_FILLS)]
        out.append(f'<g id="fence-{fi}" fill="{fill}" fill-opacity="0.8">')
        for b in f.nonempty_bands():
            out.append(f'<rect x="{_f(b.x0)}" y="{_f(-b.y1)}" width="{_f(b.x1 - b.x0)}" '
                       f'height="{_f(b.y1 - b.y0)}"/>')
        out.append("</g>")
    out.append("</g>")
    out.append(f'<g id="obstacles" fill="{OBSTACLE_FILL}">')
    for o in scene.obstacles_in(x0, x1, y0, y1):
        out.append(f'<rect x="{_f(o.x_min)}" y="{_f(-o.y_max)}" width="{_f(o.width)}" '
                   f'height="{_f(o.height)}"/>')
    out.append("</g>")
    out.append(f'<rect id="wall" x="{_f(scene.n)}" y="{_f(-y1)}" width="{stroke}" '
               f'height="{_f(h)}" fill="#000000"/>')

    def path_elem(points, attrs: str) -> str:
        points = [p for i, p in enumerate(points) if i == 0 or tuple(p) != tuple(points[i - 1])]
        if len(points) == 2:
            (ax, ay), (bx, by) = points
            return (f'<line x1="{_f(ax)}" y1="{_f(-ay)}" x2="{_f(bx)}" y2="{_f(-by)}" {attrs}/>')
        return f'<polyline points="{" ".join(pt(p) for p in points)}" fill="none" {attrs}/>'

    out.append('<g id="trips">')
    for t, traj in enumerate(trajectories):
        if len(traj) < 2:
            continue
        color = TRIP_COLORS[t % len(TRIP_COLORS)]
        out.append(path_elem(traj, f'stroke="{color}" stroke-width="{stroke}"'))
    out.append("</g>")
    if oracle_path and len(oracle_path) >= 2:
        out.append(path_elem(oracle_path, f'stroke="#000000" stroke-width="{stroke}" '
                                          f'stroke-dasharray="{_f(3 * float(stroke))}"'))
    out.append('<circle cx="0" cy="0" r="' + _f(2 * float(stroke)) + '" fill="#000000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
