"""Plain-SVG figures of planar sets on the fixed window [-3, 3]²."""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, UnsupportedRepresentation
from .sets import Ball, ConvexSet, Ellipsoid, PolytopeH, PolytopeV, _Cone, convex_hull_2d

WINDOW = 3.0
SEGMENTS = 128
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def boundary_2d(C: ConvexSet) -> np.ndarray:
    """Closed boundary polyline (rows) of a planar set; cones become clipped wedges."""
    if C.dim != 2:
        raise DimensionMismatch("figures are drawn for planar sets only")
    t = np.linspace(0.0, 2 * math.pi, SEGMENTS, endpoint=False)
    circle = np.column_stack([np.cos(t), np.sin(t)])
    if isinstance(C, Ball):
        return C.radius * circle
    if isinstance(C, Ellipsoid):
        w, U = np.linalg.eigh(C.matrix)
        return circle @ (U / np.sqrt(w)).T  # x = A^{-1/2} (cos t, sin t)
    if isinstance(C, PolytopeV):
        return convex_hull_2d(C.vertices)
    if isinstance(C, PolytopeH):
        return convex_hull_2d(C.vertices())
    if isinstance(C, _Cone):
        return _wedge(C)
    raise UnsupportedRepresentation(f"no figure for {type(C).__name__}")


def _wedge(C: _Cone, samples: int = 1440) -> np.ndarray:
    """Cone ∩ disc of radius ``WINDOW·√2``, as origin plus the member arc."""
    t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    U = np.column_stack([np.cos(t), np.sin(t)])
    inside = np.array([C.member(u) for u in U])
    if inside.all():
        return WINDOW * math.sqrt(2) * U
    if not inside.any():
        return np.zeros((1, 2))
    start = int(np.argmax(~inside & np.roll(inside, -1))) + 1  # first member after a gap
    order = np.roll(np.arange(samples), -start)
    arc = order[inside[order]]
    return np.vstack([np.zeros((1, 2)), WINDOW * math.sqrt(2) * U[arc]])


def render(sets, labels=None, title: str = "", size: int = 480) -> str:
    """SVG text overlaying the boundaries of ``sets``."""
    labels = list(labels) if labels is not None else [f"set {k}" for k in range(len(sets))]
    body = []
    for k, C in enumerate(sets):
        P = boundary_2d(C)
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{x:.6f},{y:.6f}" for x, y in P)
        fill = color if isinstance(C, _Cone) else "none"
        body.append(f'    <polygon points="{pts}" fill="{fill}" fill-opacity="0.15" '
                    f'stroke="{color}" stroke-width="0.02"><title>{labels[k]}</title></polygon>')
    legend = [f'  <text x="{-WINDOW + 0.1:.2f}" y="{-WINDOW + 0.3 + 0.3 * k:.2f}" font-size="0.22" '
              f'fill="{PALETTE[k % len(PALETTE)]}">{lab}</text>' for k, lab in enumerate(labels)]
    w = 2 * WINDOW
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{-WINDOW} {-WINDOW} {w} {w}">',
        f"  <title>{title}</title>",
        f'  <clipPath id="window"><rect x="{-WINDOW}" y="{-WINDOW}" width="{w}" height="{w}"/></clipPath>',
        f'  <line x1="{-WINDOW}" y1="0" x2="{WINDOW}" y2="0" stroke="#bbb" stroke-width="0.01"/>',
        f'  <line x1="0" y1="{-WINDOW}" x2="0" y2="{WINDOW}" stroke="#bbb" stroke-width="0.01"/>',
        '  <g clip-path="url(#window)" transform="scale(1,-1)">',
        *body,
        "  </g>",
        *legend,
        "</svg>",
        "",
    ])
