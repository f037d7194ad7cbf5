"""Maximum base-anchored axis-parallel rectangle and the half-area witness.

The sweep is a Cartesian tree on vertex heights. A node owns an open vertex
range (i, j) and the height band [y_prev, y_u], where u is the lowest vertex
inside the range. Inside that band the range is walled by the single edges
(i, i+1) and (j-1, j), so its width is linear in the height and the best
rectangle per node has a closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry_kernel import Point
from .terrain_model import Quad, Rect, Terrain


class SparseArgmin:
    """Range argmin over a fixed array; ties go to the lower index."""

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        self.v = v
        n = len(v)
        self.table = [np.arange(n)]
        k = 1
        while 2 * k <= n:
            prev = self.table[-1]
            a = prev[:n - 2 * k + 1]
            b = prev[k:n - k + 1]
            self.table.append(np.where(v[b] < v[a], b, a))
            k *= 2

    def query(self, lo: int, hi: int) -> int:
        """argmin over v[lo..hi] inclusive."""
        k = int(hi - lo + 1).bit_length() - 1
        row = self.table[k]
        a = row[lo]
        b = row[hi - (1 << k) + 1]
        return int(b) if self.v[b] < self.v[a] else int(a)


@dataclass
class EventNode:
    u: int
    lo: int  # wall vertex on the left; the range interior is lo+1..hi-1
    hi: int
    y_prev: float
    x_range: tuple  # wall crossings at y_prev
    children: list = field(default_factory=list)


@dataclass(frozen=True)
class Hexagon:
    """Width is constant below y_prev and linear on [y_prev, y_top]."""
    x_a: float
    x_d: float
    y_prev: float
    y_top: float
    left_edge: tuple  # ((x0, y0), (x1, y1)) spanning the band
    right_edge: tuple


def _cross_x(p, q, h: float, take_low_end: bool) -> float:
    (x0, y0), (x1, y1) = p, q
    if y1 == y0:
        return x0 if take_low_end else x1
    return x0 + (x1 - x0) * (h - y0) / (y1 - y0)


def hexagon_width(hx: Hexagon, h: float) -> tuple:
    h = max(h, hx.y_prev)
    xl = _cross_x(*hx.left_edge, h, True)
    xr = _cross_x(*hx.right_edge, h, False)
    return xl, xr


def max_rect_in_hexagon(hx: Hexagon) -> Rect:
    lo, hi = hx.y_prev, hx.y_top
    xl0, xr0 = hexagon_width(hx, lo)
    xl1, xr1 = hexagon_width(hx, hi)
    w0 = xr0 - xl0
    w1 = xr1 - xl1
    cands = [lo, hi]
    if hi > lo:
        s = (w1 - w0) / (hi - lo)
        if s < 0:
            # h * (w0 + s (h - lo)) peaks at (s lo - w0) / (2 s)
            hs = (s * lo - w0) / (2 * s)
            if lo < hs < hi:
                cands.append(hs)
    best = None
    for h in cands:
        if h <= 0:
            continue
        xl, xr = hexagon_width(hx, h)
        r = Rect(xl, xr, h)
        if best is None or r.area > best.area:
            best = r
    return best if best is not None else Rect(xl0, xr0, 0.0)


def _hexagon(t: Terrain, lo: int, hi: int, u: int, y_prev: float) -> Hexagon:
    xs, ys = t.xs, t.ys
    le = ((float(xs[lo]), float(ys[lo])), (float(xs[lo + 1]), float(ys[lo + 1])))
    re = ((float(xs[hi]), float(ys[hi])), (float(xs[hi - 1]), float(ys[hi - 1])))
    xa = _cross_x(*le, y_prev, True)
    xd = _cross_x(*re, y_prev, True)
    return Hexagon(xa, xd, y_prev, float(ys[u]), le, re)


def _walk(t: Terrain, build_tree: bool):
    rmq = SparseArgmin(t.ys)
    root = None
    best = None
    stack = [(0, t.n - 1, 0.0, None)]
    while stack:
        lo, hi, y_prev, parent = stack.pop()
        if hi - lo < 2:
            continue
        u = rmq.query(lo + 1, hi - 1)
        hx = _hexagon(t, lo, hi, u, y_prev)
        r = max_rect_in_hexagon(hx)
        if best is None or r.area > best.area:
            best = r
        node = None
        if build_tree:
            node = EventNode(u, lo, hi, y_prev, (hx.x_a, hx.x_d))
            if parent is None:
                root = node
            else:
                parent.children.append(node)
        yu = float(t.ys[u])
        stack.append((u, hi, yu, node))
        stack.append((lo, u, yu, node))
    return root, best


def event_decomposition(t: Terrain) -> EventNode:
    return _walk(t, True)[0]


def iter_hexagons(t: Terrain):
    rmq = SparseArgmin(t.ys)
    stack = [(0, t.n - 1, 0.0)]
    while stack:
        lo, hi, y_prev = stack.pop()
        if hi - lo < 2:
            continue
        u = rmq.query(lo + 1, hi - 1)
        yield _hexagon(t, lo, hi, u, y_prev)
        yu = float(t.ys[u])
        stack.append((u, hi, yu))
        stack.append((lo, u, yu))


def max_rect(t: Terrain) -> Rect:
    return _walk(t, False)[1]


# --- half-area witness --------------------------------------------------

def _hit_x(p, q, h):
    return p[0] + (q[0] - p[0]) * (h - p[1]) / (q[1] - p[1])


def inscribed_half_rectangle(q: Quad, eps: float = 1e-9) -> Rect:
    """Rectangle inside q with area at least half of q.

    Corners N=alpha, M=beta, P=gamma, O=delta. With M at least as high as P,
    R is the midpoint of NM and the rectangle spans the horizontal through R
    up to where it leaves q. Equal heights reduce to the midline rectangle.
    """
    a, b, c, d = q.points
    if b[1] < c[1] - eps:
        x_end = a[0] + d[0]
        r = inscribed_half_rectangle(q.mirrored(x_end), eps)
        return Rect(x_end - r.x_right, x_end - r.x_left, r.height)
    if abs(b[1] - c[1]) <= eps:
        h = 0.5 * min(b[1], c[1])
        return Rect(0.5 * (a[0] + b[0]), 0.5 * (c[0] + d[0]), h)
    h = 0.5 * b[1]
    xl = 0.5 * (a[0] + b[0])
    if h <= c[1]:
        xr = _hit_x(d, c, h)
    else:
        xr = _hit_x(b, c, h)
    return Rect(xl, xr, h)


def witness_case(q: Quad, eps: float = 1e-9) -> str:
    return "ii" if abs(q.beta[1] - q.gamma[1]) <= eps else "i"
