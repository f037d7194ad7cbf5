"""Top chord selection for fixed left and right edges.

For one (l, r) pair the free top side slides inside the wedge cut out by
the two supporting lines. Its candidates are the lower-hull edges of the
chain between the two exit points and, per hull vertex, the chord that
vertex bisects. The search itself is shared with the compiled solver.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import _kernels as K
from .candidate_chords import CandidateEdge
from .geometry_kernel import (BASE_LINE, EPS, Line, Point, Segment, cross, line_intersection,
                              line_through)
from .terrain_model import Quad, Terrain, quad_shape_ok

BALANCED = "BALANCED"
EXTREMAL = "EXTREMAL"
EDGE_DIRECT = "EDGE_DIRECT"
KIND_NAMES = {K.KIND_EXTREMAL: EXTREMAL, K.KIND_BALANCED: BALANCED,
              K.KIND_EDGE_DIRECT: EDGE_DIRECT}


@dataclass(frozen=True)
class TopChordResult:
    chord: Segment
    kind: str
    area: float
    quad: Quad


@dataclass(frozen=True)
class Butterfly:
    chord1: Segment
    chord2: Segment
    center: Optional[Point]
    tips: tuple  # (Segment a-b, Segment a'-b')
    apex: Optional[Point]  # None means the tips are parallel
    klass: str  # "A" or "V"


def make_butterfly(chord1: Segment, chord2: Segment, variable: Line, inside) -> Butterfly:
    """Butterfly of two crossing chords; V iff the tip apex lies on the kept side of `variable`.

    `inside` is any point of the kept half-plane of the variable chord.
    """
    l1 = line_through(chord1.a, chord1.b)
    l2 = line_through(chord2.a, chord2.b)
    u = line_intersection(l1, l2)
    tips = (Segment(chord1.a, chord2.a), Segment(chord1.b, chord2.b))
    o = line_intersection(line_through(*tips[0]), line_through(*tips[1]))
    klass = "A"
    if o is not None:
        side_o = variable.eval(o)
        side_in = variable.eval(inside)
        if side_o * side_in > 0:
            klass = "V"
    return Butterfly(chord1, chord2, u, tips, o, klass)


def chord_row(c: CandidateEdge) -> np.ndarray:
    return np.array([c.line.A, c.line.B, c.line.C, c.foot.x, c.tip.x, c.tip.y,
                     float(c.tip_edge), float(c.i), float(c.j)])


def chord_table(edges) -> np.ndarray:
    if not edges:
        return np.zeros((0, len(K.COLS)))
    return np.vstack([chord_row(c) for c in edges])


def quad_from_lines(l_line: Line, t_line: Line, r_line: Line, eps: float = EPS) -> Optional[Quad]:
    pts = (line_intersection(l_line, BASE_LINE), line_intersection(l_line, t_line),
           line_intersection(t_line, r_line), line_intersection(r_line, BASE_LINE))
    if any(p is None for p in pts):
        return None
    a, b, c, d = pts
    q = Quad(Point(a.x, 0.0), b, c, Point(d.x, 0.0))
    return q if quad_shape_ok(q, eps) else None


def _check_pair(l: CandidateEdge, r: CandidateEdge):
    if l.slope_sign <= 0 or r.slope_sign >= 0:
        raise ValueError("l must be a left candidate and r a right candidate")
    if not l.foot.x < r.foot.x:
        raise ValueError("l is not left of r")


def _hull_arrays(t: Terrain, l: CandidateEdge, r: CandidateEdge):
    hx = np.empty(t.n + 3)
    hy = np.empty(t.n + 3)
    m = K._andrew_lower(l.tip.x, l.tip.y, t.xs, t.ys, l.tip_edge + 1, r.tip_edge,
                        r.tip.x, r.tip.y, hx, hy)
    return hx[:m], hy[:m]


def lower_hull_between(t: Terrain, l: CandidateEdge, r: CandidateEdge) -> List[Point]:
    _check_pair(l, r)
    if l.tip.x >= r.tip.x:
        o = line_intersection(l.line, r.line)
        return [o]
    hx, hy = _hull_arrays(t, l, r)
    return [Point(float(x), float(y)) for x, y in zip(hx, hy)]


def optimal_top_chord(t: Terrain, l: CandidateEdge, r: CandidateEdge) -> Optional[TopChordResult]:
    _check_pair(l, r)
    if l.tip.x >= r.tip.x:
        return None
    hx, hy = _hull_arrays(t, l, r)
    lr, rr = chord_row(l), chord_row(r)
    ox, oy = K._apex(lr, rr)
    out = np.empty(6)
    K._search_wedge(hx, hy, 0, 1, len(hx) - 1, lr, rr, ox, oy, l.foot.x, r.foot.x,
                    l.tip_edge == r.tip_edge and not (l.tip.x == t.xs[l.tip_edge]
                                                      and r.tip.x == t.xs[r.tip_edge + 1]), out)
    if out[0] < 0:
        return None
    b = Point(float(out[1]), float(out[2]))
    c = Point(float(out[3]), float(out[4]))
    q = Quad(Point(l.foot.x, 0.0), b, c, Point(r.foot.x, 0.0))
    return TopChordResult(Segment(b, c), KIND_NAMES[int(out[5])], float(out[0]), q)


def wedge_areas(t: Terrain, l: CandidateEdge, r: CandidateEdge) -> List[float]:
    """Best area per hull element left to right: edge, vertex, edge, ... (-1 when infeasible).

    A vertex contributes its bisected chord when that chord supports the hull.
    Diagnostic for the single-peak property.
    """
    _check_pair(l, r)
    if l.tip.x >= r.tip.x:
        return []
    hx, hy = _hull_arrays(t, l, r)
    lr, rr = chord_row(l), chord_row(r)
    ox, oy = K._apex(lr, rr)
    ax, dx = l.foot.x, r.foot.x
    seq = []
    E = len(hx) - 1
    for k in range(E):
        if k > 0:
            ok, bx, by, gx, gy = K._balanced_top(hx[k], hy[k], ox, oy, lr, rr)
            a = -1.0
            if ok:
                s = (gy - by) / (gx - bx)
                s_in = (hy[k] - hy[k - 1]) / (hx[k] - hx[k - 1])
                s_out = (hy[k + 1] - hy[k]) / (hx[k + 1] - hx[k])
                if s_in <= s <= s_out:
                    a = K._quad_area(ax, bx, by, gx, gy, dx)
            seq.append(a)
        ok, bx, by, gx, gy = K._edge_top(hx[k], hy[k], hx[k + 1], hy[k + 1], lr, rr)
        seq.append(K._quad_area(ax, bx, by, gx, gy, dx) if ok else -1.0)
    return seq


def is_single_peak(seq, tol: float = 1e-9) -> bool:
    """Feasible values rise to one peak then fall; infeasible entries are ignored."""
    vals = [v for v in seq if v >= 0]
    k = 0
    while k + 1 < len(vals) and vals[k + 1] >= vals[k] - tol:
        k += 1
    while k + 1 < len(vals) and vals[k + 1] <= vals[k] + tol:
        k += 1
    return k + 1 >= len(vals)
