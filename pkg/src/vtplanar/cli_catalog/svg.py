"""Deterministic SVG drawings of built balls.

Hyperbolic balls are drawn in the Poincare disk with circular-arc edges,
Euclidean ones with straight edges, spherical ones through a stereographic
projection with sampled great-circle edges.
"""

from __future__ import annotations

import math

import numpy as np

from ..builder import GraphBall
from ..geometry import Geometry, geodesic_arc, to_plane

PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
    "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
)
SIZE = 800
SPHERE_CLIP = 4.0  # projected radius beyond which spherical faces are dropped
SAMPLES = 12


def _f(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def face_fill(color: int) -> str:
    return PALETTE[(color - 1) % len(PALETTE)]


class _Canvas:
    """Maps plane coordinates to the SVG viewport (y axis flipped)."""

    def __init__(self, pts, g: Geometry | None):
        if g is Geometry.HYPERBOLIC or not pts:
            self.cx, self.cy, self.half = 0.0, 0.0, 1.02
        else:
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            self.cx = (max(xs) + min(xs)) / 2
            self.cy = (max(ys) + min(ys)) / 2
            self.half = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9) / 2 * 1.08
        self.scale = SIZE / 2 / self.half

    def xy(self, p) -> tuple[float, float]:
        return (
            SIZE / 2 + (p[0] - self.cx) * self.scale,
            SIZE / 2 - (p[1] - self.cy) * self.scale,
        )

    def length(self, r: float) -> float:
        return r * self.scale


def _slerp(p: np.ndarray, q: np.ndarray, n: int) -> list[np.ndarray]:
    omega = math.acos(max(-1.0, min(1.0, float(p @ q))))
    if omega < 1e-12:
        return [p, q]
    out = []
    for k in range(n + 1):
        t = k / n
        out.append((math.sin((1 - t) * omega) * p + math.sin(t * omega) * q) / math.sin(omega))
    return out


def _segment(canvas: _Canvas, p, q, g: Geometry | None, first: bool, raw=None) -> str:
    """Path commands drawing the edge from ``p`` to ``q`` (plane points)."""
    x0, y0 = canvas.xy(p)
    x1, y1 = canvas.xy(q)
    head = f"M {_f(x0)} {_f(y0)} " if first else ""
    if g is Geometry.HYPERBOLIC:
        arc = geodesic_arc(p, q)
        if arc is not None and arc[2] < 1e6:
            cx, cy, r = arc
            cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
            # the y flip turns counter-clockwise into decreasing screen angle (sweep 0)
            sweep = 0 if cross > 0 else 1
            rr = _f(canvas.length(r))
            return head + f"A {rr} {rr} 0 0 {sweep} {_f(x1)} {_f(y1)}"
    if g is Geometry.SPHERICAL and raw is not None:
        pts = [canvas.xy(to_plane(s, g)) for s in _slerp(raw[0], raw[1], SAMPLES)[1:]]
        return head + " ".join(f"L {_f(x)} {_f(y)}" for x, y in pts)
    return head + f"L {_f(x1)} {_f(y1)}"


def render_svg(ball: GraphBall, title: str | None = None) -> str:
    """SVG text for a ball built with coordinates."""
    raw = ball.coordinates()
    if len(raw) != len(ball.vertices):
        raise ValueError("the ball was built without coordinates")
    g = ball.geometry
    raw = {v: np.asarray(p, dtype=float) for v, p in raw.items()}
    if g is Geometry.SPHERICAL:
        # |stereographic image| = tan(angle from the root / 2); skip the far cap
        cut = math.cos(2 * math.atan(SPHERE_CLIP))
        raw = {v: p for v, p in raw.items() if p[2] >= cut}
    plane = {v: to_plane(p, g) for v, p in raw.items()}
    visible = set(plane)
    canvas = _Canvas([plane[v] for v in sorted(visible)], g)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>')
    if g is Geometry.HYPERBOLIC:
        c = _f(SIZE / 2)
        lines.append(
            f'<circle cx="{c}" cy="{c}" r="{_f(canvas.length(1.0))}" fill="none" '
            'stroke="#000000" stroke-width="1.5"/>'
        )

    lines.append('<g id="faces" stroke="none">')
    for color, chain in sorted(ball.faces, key=lambda f: (f[0], f[1])):
        vs = [v for v, _ in chain]
        if not all(v in visible for v in vs):
            continue
        parts = []
        for k, v in enumerate(vs):
            w = vs[(k + 1) % len(vs)]
            parts.append(_segment(canvas, plane[v], plane[w], g, k == 0, (raw[v], raw[w])))
        lines.append(f'<path d="{" ".join(parts)} Z" fill="{face_fill(color)}"/>')
    lines.append("</g>")

    lines.append('<g id="edges" fill="none" stroke="#222222" stroke-width="1">')
    for (a, x), (b, _) in ball.edges():
        if a not in visible or b not in visible:
            continue
        d = _segment(canvas, plane[a], plane[b], g, True, (raw[a], raw[b]))
        lines.append(f'<path d="{d}" data-color="a{ball.pair.xi[x]}"/>')
    lines.append("</g>")

    lines.append('<g id="vertices" fill="#000000">')
    for v in sorted(visible):
        x, y = canvas.xy(plane[v])
        r = 3.0 if v == ball.root else 1.5
        lines.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
