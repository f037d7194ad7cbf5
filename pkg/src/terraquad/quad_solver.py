"""Maximum-area convex quadrilateral with its base on the terrain base.

Four passes, combined in a fixed order:
  extremal-left        left and right sides are candidate edges
  balanced-left        left side bisected at a pivot vertex, top rising
  mirrored-extremal    the same two passes on the mirrored terrain,
  mirrored-balanced    mapped back (covers falling top sides)
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import _kernels as K
from .butterfly import KIND_NAMES, chord_row
from .candidate_chords import CandidateEdge
from .geometry_kernel import EPS, Point, Segment
from .terrain_model import Quad, Terrain, mirror

PASS_ORDER = ("extremal-left", "balanced-left", "mirrored-extremal-left",
              "mirrored-balanced-left")
ANGLE_EPS = 1e-6

_threads_set = False


def configure_threads() -> int:
    """Apply TERRAQUAD_THREADS (a cap) to the compiled passes; returns the thread count."""
    global _threads_set
    import numba
    cap = os.environ.get("TERRAQUAD_THREADS")
    n = numba.config.NUMBA_NUM_THREADS
    if cap:
        n = max(1, min(n, int(cap)))
    numba.set_num_threads(n)
    _threads_set = True
    return n


class OrderingViolation(AssertionError):
    pass


@dataclass(frozen=True)
class FeasibleRegion:
    v: int
    y_level: float
    segment: Segment  # on y = y_level, from the left limit to the right edge
    beta_max: float  # beta.x bound from the lower half of the left side


@dataclass
class PassResult:
    name: str
    quad: Optional[Quad] = None
    area: float = -1.0
    top_kind: str = ""
    triangle: Optional[Quad] = None
    triangle_area: float = -1.0
    stats: dict = field(default_factory=dict)


@dataclass
class SolveReport:
    best: Optional[Quad]
    area: float
    pass_name: str
    structure: dict
    best_proper: Optional[Quad]
    degenerate_flag: bool
    passes: Dict[str, PassResult]
    stats: dict

    def to_dict(self) -> dict:
        def q(x):
            return None if x is None else x.to_list()
        return {
            "area": self.area,
            "vertices": q(self.best),
            "pass": self.pass_name,
            "structure": self.structure,
            "degenerate_flag": self.degenerate_flag,
            "best_proper": None if self.best_proper is None else {
                "area": self.best_proper.area, "vertices": q(self.best_proper)},
            "passes": {k: {"area": p.area if p.quad else None, "vertices": q(p.quad),
                           "top_kind": p.top_kind or None,
                           "triangle_area": p.triangle_area if p.triangle else None}
                       for k, p in self.passes.items()},
            "stats": self.stats,
        }


def _quad_of(row) -> Quad:
    return Quad(Point(float(row[1]), 0.0), Point(float(row[2]), float(row[3])),
                Point(float(row[4]), float(row[5])), Point(float(row[6]), 0.0))


def _pick(rows) -> int:
    """Index of the best row (area, ax, bx, ...); -1 if none.

    Areas within a relative 1e-12 of the maximum tie; ties go to the
    lexicographically smallest (ax, bx).
    """
    rows = np.asarray(rows, dtype=float)
    if rows.size == 0:
        return -1
    a = rows[:, 0]
    if not (a >= 0).any():
        return -1
    top = a.max()
    near = np.flatnonzero(a >= top - K.TIE_REL * max(1.0, top))
    k = np.lexsort((rows[near, 2], rows[near, 1]))[0]
    return int(near[k])


def _tables(t: Terrain):
    L = K.left_candidate_rows(t.xs, t.ys)
    R = K.right_candidate_rows(t.xs, t.ys)
    L = L[np.argsort(-L[:, K.CTX], kind="stable")]
    e = R[:, K.CEDGE].astype(int)
    last = e + (R[:, K.CTX] == t.xs[np.minimum(e + 1, t.n - 1)])
    Rj = R[np.lexsort((R[:, K.CJ], R[:, K.CI], last))]
    return L, R, Rj


def _extremal(t: Terrain, L, R, paranoid: bool, name: str) -> PassResult:
    t0 = time.perf_counter()
    pr = PassResult(name)
    if len(L) and len(R):
        res, tri, counts = K.extremal_pass(t.xs, t.ys, L, R, paranoid)
        k = _pick(res)
        if k >= 0:
            pr.quad = _quad_of(res[k])
            pr.area = float(res[k][0])
            pr.top_kind = KIND_NAMES[int(res[k][7])]
        # triangle rows: area, ax, ox, oy, dx
        kt = _pick(tri)
        if kt >= 0:
            a, ax, ox, oy, dx = tri[kt]
            o = Point(float(ox), float(oy))
            pr.triangle = Quad(Point(float(ax), 0.0), o, o, Point(float(dx), 0.0))
            pr.triangle_area = float(a)
        pr.stats = {"pairs": int(counts[:, 0].sum()), "evaluations": int(counts[:, 1].sum())}
    pr.stats["seconds"] = time.perf_counter() - t0
    return pr


def _balanced(t: Terrain, Rj, paranoid: bool, name: str) -> PassResult:
    t0 = time.perf_counter()
    pr = PassResult(name)
    if len(Rj) and t.n >= 3:
        res, counts = K.balanced_pass(t.xs, t.ys, Rj, paranoid)
        k = _pick(res)
        if k >= 0:
            pr.quad = _quad_of(res[k])
            pr.area = float(res[k][0])
            pr.top_kind = KIND_NAMES[int(res[k][7])]
        pr.stats = {"pivot_pairs": int(counts[:, 0].sum()),
                    "evaluations": int(counts[:, 1].sum())}
    pr.stats["seconds"] = time.perf_counter() - t0
    return pr


def _mirror_result(pr: PassResult, x_end: float) -> PassResult:
    if pr.quad is not None:
        pr.quad = pr.quad.mirrored(x_end)
    if pr.triangle is not None:
        pr.triangle = pr.triangle.mirrored(x_end)
    return pr


def max_quad_extremal_left(t: Terrain, paranoid: bool = False) -> Optional[Quad]:
    L, R, _ = _tables(t)
    return _extremal(t, L, R, paranoid, PASS_ORDER[0]).quad


def max_quad_balanced_left(t: Terrain, paranoid: bool = False) -> Optional[Quad]:
    _, _, Rj = _tables(t)
    return _balanced(t, Rj, paranoid, PASS_ORDER[1]).quad


def run_passes(t: Terrain, paranoid: bool = False) -> Dict[str, PassResult]:
    if not _threads_set:
        configure_threads()
    m = mirror(t)
    x_end = float(t.xs[0] + t.xs[-1])
    L, R, Rj = _tables(t)
    mL, mR, mRj = _tables(m)
    out = {
        PASS_ORDER[0]: _extremal(t, L, R, paranoid, PASS_ORDER[0]),
        PASS_ORDER[1]: _balanced(t, Rj, paranoid, PASS_ORDER[1]),
        PASS_ORDER[2]: _mirror_result(_extremal(m, mL, mR, paranoid, PASS_ORDER[2]), x_end),
        PASS_ORDER[3]: _mirror_result(_balanced(m, mRj, paranoid, PASS_ORDER[3]), x_end),
    }
    out["_sizes"] = (len(L), len(R))
    return out


def is_degenerate(q: Quad, diameter: float, eps: float = EPS, angle_eps: float = ANGLE_EPS) -> bool:
    pts = q.points
    sides = [math.dist(pts[k], pts[(k + 1) % 4]) for k in range(4)]
    if min(sides) < eps * diameter:
        return True
    for k in range(4):
        p0, p1, p2 = pts[k - 1], pts[k], pts[(k + 1) % 4]
        u = (p0[0] - p1[0], p0[1] - p1[1])
        w = (p2[0] - p1[0], p2[1] - p1[1])
        c = (u[0] * w[0] + u[1] * w[1]) / (math.hypot(*u) * math.hypot(*w))
        ang = math.acos(max(-1.0, min(1.0, c)))
        if ang < angle_eps or math.pi - ang < angle_eps:
            return True
    return False


def _structure(name: str, top_kind: str) -> dict:
    if name.endswith("balanced-left"):
        s = {"left": "balanced", "top": "extremal", "right": "extremal"}
    elif top_kind == "TRIANGLE":
        s = {"left": "extremal", "top": "none", "right": "extremal"}
    else:
        s = {"left": "extremal", "top": top_kind.lower(), "right": "extremal"}
    if name.startswith("mirrored"):
        s["left"], s["right"] = s["right"], s["left"]
    return s


def max_quad(t: Terrain, paranoid: bool = False) -> SolveReport:
    t0 = time.perf_counter()
    passes = run_passes(t, paranoid)
    nl, nr = passes.pop("_sizes")
    diam = t.diameter
    cands = []  # (row, quad, pass, kind)
    for name in PASS_ORDER:
        p = passes[name]
        if p.quad is not None:
            cands.append((p.quad, name, p.top_kind))
        if p.triangle is not None:
            cands.append((p.triangle, name, "TRIANGLE"))
    rows = [(q.area, q.alpha.x, q.beta.x) for q, _, _ in cands]
    k = _pick(rows)
    proper = [c for c in cands if c[2] != "TRIANGLE" and not is_degenerate(c[0], diam)]
    kp = _pick([(q.area, q.alpha.x, q.beta.x) for q, _, _ in proper])
    stats = {"n": t.n, "left_candidates": nl, "right_candidates": nr,
             "pairs": sum(p.stats.get("pairs", 0) for p in passes.values()),
             "pivot_pairs": sum(p.stats.get("pivot_pairs", 0) for p in passes.values()),
             "evaluations": sum(p.stats.get("evaluations", 0) for p in passes.values()),
             "paranoid": paranoid}
    stats["seconds"] = time.perf_counter() - t0
    if k < 0:
        return SolveReport(None, 0.0, "", {}, None, True, passes, stats)
    q, name, kind = cands[k]
    return SolveReport(q, q.area, name, _structure(name, kind),
                       proper[kp][0] if kp >= 0 else None,
                       kind == "TRIANGLE" or is_degenerate(q, diam), passes, stats)


def balanced_pivots(t: Terrain, r: CandidateEdge) -> List[FeasibleRegion]:
    """Vertices that can pivot a balanced left side against r, left to right."""
    rr = chord_row(r)
    out = []
    for v in range(1, t.n - 1):
        cap, ms, lb = K.pivot_tables(t.xs, t.ys, v)
        lo, hi, c, w = K.pivot_range(t.xs, t.ys, v, rr, cap, ms, lb)
        if not lo < hi:
            continue
        h2 = 2.0 * float(t.ys[v])
        br = -(rr[K.CB] * h2 + rr[K.CC]) / rr[K.CA]
        out.append(FeasibleRegion(v, h2, Segment(Point(float(lo), h2), Point(float(br), h2)),
                                  float(t.xs[v] + cap)))
    for a, b in zip(out, out[1:]):
        if not t.ys[a.v] < t.ys[b.v]:
            raise OrderingViolation(f"pivot heights not increasing at v{a.v}, v{b.v}")
        if not a.y_level < b.y_level:
            raise OrderingViolation(f"feasible regions not stacked at v{a.v}, v{b.v}")
    return out


def side_structure(t: Terrain, q: Quad, tol: float = 1e-7) -> dict:
    """Classify each non-base side.

    extremal: two vertices on it; balanced: bisected at a vertex;
    vertex_tip: one vertex on it and an endpoint on the chain;
    tip_tip: both endpoints on the chain; else other.
    """
    V = np.column_stack([t.xs, t.ys])
    scale = max(1.0, t.diameter)

    def on_chain(p):
        return abs(float(np.interp(p[0], t.xs, t.ys)) - p[1]) <= tol * scale

    def kind(a, b):
        d = np.array(b) - np.array(a)
        L = math.hypot(*d)
        if L < tol * scale:
            return "point"
        dist = np.abs(d[0] * (V[:, 1] - a[1]) - d[1] * (V[:, 0] - a[0])) / L
        touching = int(np.sum(dist <= tol * scale))
        if touching >= 2:
            return "extremal"
        mid = 0.5 * (np.array(a) + np.array(b))
        if np.min(np.hypot(V[:, 0] - mid[0], V[:, 1] - mid[1])) <= tol * scale:
            return "balanced"
        if touching == 1 and (on_chain(a) or on_chain(b)):
            return "vertex_tip"
        if on_chain(a) and on_chain(b):
            return "tip_tip"
        return "other"
    return {"left": kind(q.alpha, q.beta), "top": kind(q.beta, q.gamma),
            "right": kind(q.gamma, q.delta)}
