"""Static SVG of a terrain with an optional quad or rectangle on top."""
from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape

from .terrain_model import Quad, Rect, Terrain

STROKE = {"extremal": "#c0392b", "balanced": "#2471a3", "edge_direct": "#7d3c98",
          "none": "#555555", "base": "#555555"}


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_svg(t: Terrain, quad: Optional[Quad] = None, structure: Optional[dict] = None,
               rect: Optional[Rect] = None, width: int = 800, title: str = "") -> str:
    x0, x1 = float(t.xs[0]), float(t.xs[-1])
    ymax = float(t.ys.max()) or 1.0
    pad = 20
    sx = (width - 2 * pad) / (x1 - x0)
    height = int(ymax * sx + 2 * pad + 20)

    def P(p):
        return f"{_fmt(pad + (p[0] - x0) * sx)},{_fmt(height - pad - p[1] * sx)}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    pts = " ".join(P(v) for v in zip(t.xs, t.ys))
    out.append(f'<polygon class="terrain" points="{pts}" fill="#e8dcc4" stroke="#8a7b5c" '
               f'stroke-width="1"/>')
    if rect is not None:
        c = " ".join(P(p) for p in rect.corners)
        out.append(f'<polygon class="rect" points="{c}" fill="#58d68d" fill-opacity="0.35" '
                   f'stroke="#1e8449" stroke-width="2"/>')
    if quad is not None:
        c = " ".join(P(p) for p in quad.points)
        out.append(f'<polygon class="quad" points="{c}" fill="#f5b041" fill-opacity="0.35" '
                   f'stroke="none"/>')
        structure = structure or {}
        sides = (("left", quad.alpha, quad.beta), ("top", quad.beta, quad.gamma),
                 ("right", quad.gamma, quad.delta), ("base", quad.delta, quad.alpha))
        for name, a, b in sides:
            kind = "base" if name == "base" else structure.get(name, "extremal")
            color = STROKE.get(kind, "#333333")
            out.append(f'<line class="side {escape(name)} {escape(kind)}" x1="{P(a).split(",")[0]}" '
                       f'y1="{P(a).split(",")[1]}" x2="{P(b).split(",")[0]}" '
                       f'y2="{P(b).split(",")[1]}" stroke="{color}" stroke-width="2.5"/>')
            if name != "base":
                mx, my = P(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)).split(",")
                out.append(f'<text x="{mx}" y="{my}" font-size="12" fill="{color}" '
                           f'font-family="sans-serif">{escape(name)}: {escape(kind)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
