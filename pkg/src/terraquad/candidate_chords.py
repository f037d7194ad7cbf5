"""Candidate left/right edges: extremal chords that reach the base.

The geodesic tree from v1 is the lower convex hull of each prefix v1..vj,
so a single monotone-chain sweep yields every parent pointer. Every tree
edge, extended down to the base and up to its exit point, is a candidate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .geometry_kernel import Line, Point, base_foot, cross, line_through
from .terrain_model import Terrain, contains_segment, mirror

POSITIVE = 1
NEGATIVE = -1


@dataclass(frozen=True)
class ShortestPathTree:
    root: int
    parent: tuple  # parent[root] == -1


@dataclass(frozen=True)
class CandidateEdge:
    i: int
    j: int
    foot: Point
    tip: Point
    tip_edge: int  # tip lies on chain edge (tip_edge, tip_edge + 1)
    slope_sign: int
    line: Line

    @property
    def key(self) -> tuple:
        return (self.i, self.j, self.slope_sign)


def _prefix_parents(xs, ys) -> list:
    n = len(xs)
    parent = [-1] * n
    st: List[int] = []
    for j in range(n):
        while len(st) >= 2 and cross((xs[st[-2]], ys[st[-2]]), (xs[st[-1]], ys[st[-1]]),
                                     (xs[j], ys[j])) <= 0:
            st.pop()
        if st:
            parent[j] = st[-1]
        st.append(j)
    return parent


def shortest_path_tree(t: Terrain, root: str = "LEFT_BASE") -> ShortestPathTree:
    if root == "LEFT_BASE":
        return ShortestPathTree(0, tuple(_prefix_parents(t.xs, t.ys)))
    if root != "RIGHT_BASE":
        raise ValueError(f"unknown root {root!r}")
    n = t.n
    mp = _prefix_parents(-t.xs[::-1], t.ys[::-1])
    par = [-1] * n
    for k, p in enumerate(mp):
        if p >= 0:
            par[n - 1 - k] = n - 1 - p
    return ShortestPathTree(n - 1, tuple(par))


def exit_point(xs, ys, line: Line, start: int) -> Tuple[Point, int]:
    """First chain exit of a rising line to the right of vertex `start`."""
    vx = xs[start + 1:]
    d = ys[start + 1:] + (line.A * vx + line.C) / line.B  # chain minus line
    below = np.flatnonzero(d < 0)
    k = start + 1 + int(below[0]) if len(below) else len(xs) - 1
    if k - 1 == start:
        return Point(float(xs[start]), float(ys[start])), start
    x0, y0, x1, y1 = xs[k - 1], ys[k - 1], xs[k], ys[k]
    # solve on edge (k-1, k)
    f0 = y0 + (line.A * x0 + line.C) / line.B
    f1 = y1 + (line.A * x1 + line.C) / line.B
    s = f0 / (f0 - f1)
    return Point(float(x0 + s * (x1 - x0)), float(y0 + s * (y1 - y0))), k - 1


def _edges_from_rows(rows, sign) -> list:
    out = []
    for A, B, C, fx, tx, ty, e, i, j in rows:
        out.append(CandidateEdge(int(i), int(j), Point(float(fx), 0.0), Point(float(tx), float(ty)),
                                 int(e), sign, Line(float(A), float(B), float(C))))
    return out


def candidate_edges(t: Terrain) -> Tuple[list, list]:
    """C_L from the tree rooted at v1, C_R from the mirrored sweep; C_R sorted by (i, j)."""
    from . import _kernels as K
    CL = _edges_from_rows(K.left_candidate_rows(t.xs, t.ys), POSITIVE)
    CR = _edges_from_rows(K.right_candidate_rows(t.xs, t.ys), NEGATIVE)
    CR.sort(key=lambda c: (c.i, c.j))
    return CL, CR


def candidate_edges_brute(t: Terrain) -> Tuple[list, list]:
    """Every vertex pair whose line reaches the base with the foot-to-vertex part inside."""
    xs, ys = t.xs, t.ys
    n = t.n
    CL, CR = [], []
    for i in range(n):
        for j in range(i + 1, n):
            if ys[j] == ys[i]:
                continue
            a, b = t.vertex(i), t.vertex(j)
            ln = line_through(a, b)
            if ys[j] > ys[i]:
                foot = a if ys[i] == 0 else base_foot(ln)
                if foot is None or foot.x < xs[0] - t.eps or not contains_segment(t, foot, b):
                    continue
                tip, e = exit_point(xs, ys, ln, j)
                CL.append(CandidateEdge(i, j, foot, tip, e, POSITIVE, ln))
            else:
                foot = b if ys[j] == 0 else base_foot(ln)
                if foot is None or foot.x > xs[-1] + t.eps or not contains_segment(t, a, foot):
                    continue
                m = mirror(t)
                mln = line_through((m.xs[n - 1 - j], m.ys[n - 1 - j]), (m.xs[n - 1 - i], m.ys[n - 1 - i]))
                mtip, me = exit_point(m.xs, m.ys, mln, n - 1 - i)
                if me == n - 1 - i:
                    tip = t.vertex(i)
                else:
                    tip = Point(float(xs[-1] + xs[0] - mtip.x), mtip.y)
                CR.append(CandidateEdge(i, j, foot, tip, n - 2 - me, NEGATIVE, ln))
    return CL, CR
