"""Deterministic SVG figures: polygons with their diameters, and unfolded geodesic strips."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .core import Unplottable, format_angle
from .planar import ConvexPolygon, polygon_diameter

SIZE = 480
MARGIN = 40


class _Frame:
    """Maps data coordinates into the square canvas, y pointing up."""

    def __init__(self, points: np.ndarray):
        if len(points) == 0:
            raise Unplottable("nothing to draw")
        lo, hi = points.min(axis=0), points.max(axis=0)
        span = float(max(hi - lo)) or 1.0
        self.lo, self.s = lo, (SIZE - 2 * MARGIN) / span
        self.off = (SIZE - 2 * MARGIN - (hi - lo) * self.s) / 2

    def __call__(self, p) -> tuple[str, str]:
        x = MARGIN + self.off[0] + (p[0] - self.lo[0]) * self.s
        y = SIZE - (MARGIN + self.off[1] + (p[1] - self.lo[1]) * self.s)
        return f"{x:.3f}", f"{y:.3f}"


def _header() -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]


def _poly(frame: _Frame, pts, **style) -> str:
    coords = " ".join(",".join(frame(p)) for p in pts)
    attrs = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())
    return f'<polygon points="{coords}" {attrs}/>'


def _line(frame: _Frame, a, b, **style) -> str:
    (x1, y1), (x2, y2) = frame(a), frame(b)
    attrs = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())
    return f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {attrs}/>'


def _label(frame: _Frame, p, text: str) -> list[str]:
    x, y = frame(p)
    return [f'<circle cx="{x}" cy="{y}" r="3.5" fill="#1f5fbf"/>',
            f'<text x="{x}" y="{y}" dx="6" dy="-6" font-family="monospace" font-size="11">{escape(text)}</text>']


def polygon_svg(P: ConvexPolygon, marked: Sequence[int] = (), title: str | None = None) -> str:
    """Polygon outline, every diameter in red, and marked vertices labelled with their angles."""
    frame = _Frame(P.array)
    out = _header()
    out.append(_poly(frame, P.vertices, fill="#eef3fb", stroke="black", stroke_width="1.5"))
    for i, j in polygon_diameter(P).vertex_pairs:
        out.append(_line(frame, P.vertices[i], P.vertices[j], stroke="#c62828", stroke_width="2"))
    for i in marked:
        out.extend(_label(frame, P.vertices[i], f"v{i}: {format_angle(P.angles[i])}"))
    if title:
        out.append(f'<text x="{MARGIN}" y="20" font-family="monospace" font-size="12">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def unfolding_svg(faces: Sequence[Sequence[Sequence[float]]], segment: Sequence[Sequence[float]],
                  title: str | None = None) -> str:
    """Unfolded face strip with the geodesic drawn as a polyline through it."""
    if not faces or len(segment) < 2:
        raise Unplottable("report has no unfolded geodesic")
    pts = np.array([p for f in faces for p in f] + list(segment), dtype=float)
    frame = _Frame(pts)
    out = _header()
    for f in faces:
        out.append(_poly(frame, f, fill="#f4f4f4", stroke="#555555", stroke_width="1"))
    for a, b in zip(segment, segment[1:]):
        out.append(_line(frame, a, b, stroke="#c62828", stroke_width="2"))
    out.extend(_label(frame, segment[0], "p"))
    out.extend(_label(frame, segment[-1], "q"))
    if title:
        out.append(f'<text x="{MARGIN}" y="20" font-family="monospace" font-size="12">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
