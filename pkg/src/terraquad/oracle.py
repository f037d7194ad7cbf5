"""Ground truth for the solvers.

quad_oracle_structural  brute force over the same structured candidates the
                        solver searches (sides through two vertices or
                        bisected at a vertex), with a plain containment test.
quad_oracle_numeric     unstructured local search over all quads; a lower bound.
rect_oracle             exhaustive height-band scan for rectangles.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ._oracle_kernels import project_rows
from .candidate_chords import candidate_edges_brute
from .geometry_kernel import EPS, Point, bisected_segment_through, line_through
from .terrain_model import Quad, Rect, Terrain, contains_quad, mirror, terrain_to_json

STRUCTURAL = "STRUCTURAL"
NUMERIC = "NUMERIC"
RECT_SWEEP_BRUTE = "RECT_SWEEP_BRUTE"
STRUCTURAL_MAX_N = 14


@dataclass
class OracleResult:
    area: float
    solution: object  # Quad or Rect
    method: str
    evaluations: int
    family: str = ""


# --- vectorized feasibility -------------------------------------------------

def _feasible(xs, ys, ax, bx, by, gx, gy, dx, eps):
    """Mask of corner sets that form a convex base-anchored quad below the chain."""
    ok = (ax >= xs[0] - eps) & (dx <= xs[-1] + eps) & (ax < dx)
    ok &= (by > 0) & (gy > 0) & (ax <= bx + eps) & (bx <= gx + eps) & (gx <= dx + eps)
    # clockwise convexity: every turn non-positive
    P = [(ax, 0 * ax), (bx, by), (gx, gy), (dx, 0 * dx)]
    for k in range(4):
        (x0, y0), (x1, y1), (x2, y2) = P[k - 1], P[k], P[(k + 1) % 4]
        cr = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
        ok &= cr <= eps * np.maximum(1.0, np.abs(x1 - x0) + np.abs(x2 - x1))
    if not ok.any():
        return ok
    ok &= by <= np.interp(bx, xs, ys) + eps
    ok &= gy <= np.interp(gx, xs, ys) + eps
    X = xs[None, :]
    A, BX, BY, GX, GY, D = (v[:, None] for v in (ax, bx, by, gx, gy, dx))
    with np.errstate(divide="ignore", invalid="ignore"):
        yl = np.where(BX > A, BY * (X - A) / (BX - A), BY)
        yt = np.where(GX > BX, BY + (GY - BY) * (X - BX) / (GX - BX), np.maximum(BY, GY))
        yr = np.where(D > GX, GY * (D - X) / (D - GX), GY)
    py = np.where(X <= BX, yl, np.where(X <= GX, yt, yr))
    inside = (X > A) & (X < D)
    bad = inside & (py > ys[None, :] + eps)
    return ok & ~bad.any(axis=1)


class _Best:
    def __init__(self):
        self.area = -1.0
        self.q = None
        self.family = ""
        self.evals = 0

    def offer(self, xs, ys, ax, bx, by, gx, gy, dx, family, eps):
        ax, bx, by, gx, gy, dx = np.broadcast_arrays(*(np.atleast_1d(np.asarray(v, float))
                                                       for v in (ax, bx, by, gx, gy, dx)))
        self.evals += len(ax)
        good = np.isfinite(ax + bx + by + gx + gy + dx)
        if not good.any():
            return
        ax, bx, by, gx, gy, dx = (v[good] for v in (ax, bx, by, gx, gy, dx))
        m = _feasible(xs, ys, ax, bx, by, gx, gy, dx, eps)
        if not m.any():
            return
        area = 0.5 * np.abs((gx - ax) * by - (bx - dx) * gy)
        area = np.where(m, area, -1.0)
        k = int(np.argmax(area))
        if area[k] > self.area * (1 + 1e-12):
            self.area = float(area[k])
            self.q = Quad(Point(float(ax[k]), 0.0), Point(float(bx[k]), float(by[k])),
                          Point(float(gx[k]), float(gy[k])), Point(float(dx[k]), 0.0))
            self.family = family


def _meet_lines(L, A, B, C):
    """Intersections of line L with lines (A, B, C) given as arrays."""
    det = L.A * B - A * L.B
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (L.B * C - B * L.C) / det
        y = (A * L.C - L.A * C) / det
    x = np.where(np.abs(det) > 1e-14, x, np.nan)
    return x, y


def _pair_lines(P):
    """Normalized lines through every pair of the given points."""
    A, B, C = [], [], []
    for p, q in itertools.combinations(P, 2):
        if p == q:
            continue
        ln = line_through(p, q)
        A.append(ln.A)
        B.append(ln.B)
        C.append(ln.C)
    return np.array(A), np.array(B), np.array(C)


def _extremal_sides(t: Terrain, CL, CR, best: _Best, eps):
    xs, ys = t.xs, t.ys
    V = t.vertices
    for l in CL:
        for r in CR:
            ax, dx = l.foot.x, r.foot.x
            if not ax < dx:
                continue
            o = _meet_lines(l.line, np.array([r.line.A]), np.array([r.line.B]),
                            np.array([r.line.C]))
            ox, oy = float(o[0][0]), float(o[1][0])
            best.offer(xs, ys, ax, ox, oy, ox, oy, dx, "triangle", eps)
            A, B, C = _pair_lines(V + [l.tip, r.tip])
            bx, by = _meet_lines(l.line, A, B, C)
            gx, gy = _meet_lines(r.line, A, B, C)
            best.offer(xs, ys, ax, bx, by, gx, gy, dx, "extremal-top", eps)
            d1 = (ax - ox, -oy)
            d2 = (dx - ox, -oy)
            for w in V[1:-1]:
                s = bisected_segment_through(w, (ox, oy), d1, d2)
                if s is not None:
                    best.offer(xs, ys, ax, s.a.x, s.a.y, s.b.x, s.b.y, dx, "balanced-top", eps)


def _balanced_left(t: Terrain, CR, best: _Best, eps, family, x_map=None):
    """Left side bisected at a vertex, top through two vertices with positive slope."""
    xs, ys = t.xs, t.ys
    V = t.vertices
    for (i, j) in itertools.combinations(range(t.n), 2):
        if not ys[j] > ys[i]:
            continue
        T = line_through(V[i], V[j])
        o = (-T.C / T.A, 0.0)
        up = T.direction()
        for v in V[1:-1]:
            for sgn in (1.0, -1.0):
                s = bisected_segment_through(v, o, (sgn, 0.0), up)
                if s is None:
                    continue
                a, b = s.a, s.b
                if b.x > xs[i] + eps:
                    continue
                for r in CR:
                    gx, gy = _meet_lines(r.line, np.array([T.A]), np.array([T.B]),
                                         np.array([T.C]))
                    if not (gx[0] >= xs[j] - eps):
                        continue
                    best.offer(xs, ys, a.x, b.x, b.y, gx, gy, r.foot.x, family, eps)


def quad_oracle_structural(t: Terrain, eps: float = EPS) -> OracleResult:
    if t.n > STRUCTURAL_MAX_N:
        raise ValueError(f"structural oracle limited to n <= {STRUCTURAL_MAX_N}, got {t.n}")
    CL, CR = candidate_edges_brute(t)
    best = _Best()
    _extremal_sides(t, CL, CR, best, eps)
    _balanced_left(t, CR, best, eps, "balanced-left")
    m = mirror(t)
    mbest = _Best()
    _, mCR = candidate_edges_brute(m)
    _balanced_left(m, mCR, mbest, eps, "balanced-right")
    best.evals += mbest.evals
    if mbest.q is not None and mbest.area > best.area * (1 + 1e-12):
        best.area = mbest.area
        best.q = mbest.q.mirrored(float(t.xs[0] + t.xs[-1]))
        best.family = mbest.family
    if best.q is None:
        return OracleResult(0.0, None, STRUCTURAL, best.evals)
    if not contains_quad(t, best.q, 1e-7 * max(1.0, t.diameter)):
        raise AssertionError("structural oracle produced an uncontained quad")
    return OracleResult(best.q.area, best.q, STRUCTURAL, best.evals, best.family)


# --- numeric ----------------------------------------------------------------

def _project(Z, xs, ys):
    """Map raw (..., 6) parameters onto feasible quads; returns (area, params).

    numpy reference for the compiled project_rows used in the search.

    Order and convexity are repaired first, then the quad is scaled down
    vertically until it fits under the chain.
    """
    a, bx, by, cx, cy, d = (np.array(v, dtype=float) for v in np.moveaxis(Z, -1, 0))
    a = np.clip(a, xs[0], xs[-1])
    d = np.clip(d, xs[0], xs[-1])
    a, d = np.minimum(a, d), np.maximum(a, d)
    bx = np.clip(bx, a, d)
    cx = np.clip(cx, a, d)
    bx, cx = np.minimum(bx, cx), np.maximum(bx, cx)
    by = np.abs(by)
    cy = np.abs(cy)
    with np.errstate(divide="ignore", invalid="ignore"):
        by = np.maximum(by, np.where(cx > a, cy * (bx - a) / (cx - a), 0.0))
        cy = np.maximum(cy, np.where(d > bx, by * (d - cx) / (d - bx), 0.0))
        X = xs.reshape((1,) * a.ndim + (-1,))
        A, BX, BY, CX, CY, D = (v[..., None] for v in (a, bx, by, cx, cy, d))
        p1 = BY * (X - A) / (BX - A)
        p2 = BY + (CY - BY) * (X - BX) / (CX - BX)
        p3 = CY * (D - X) / (D - CX)
        P = np.where(X <= BX, p1, np.where(X <= CX, p2, p3))
        inside = (X > A) & (X < D) & np.isfinite(P) & (P > 0)
        k = np.where(inside, ys / np.where(inside, P, 1.0), np.inf).min(axis=-1)
        k = np.minimum(k, np.where(by > 0, np.interp(bx, xs, ys) / by, np.inf))
        k = np.minimum(k, np.where(cy > 0, np.interp(cx, xs, ys) / cy, np.inf))
    k = np.where(np.isfinite(k), k, 0.0)
    by = by * k
    cy = cy * k
    area = 0.5 * ((bx - a) * by + (cx - bx) * (by + cy) + (d - cx) * cy)
    return area, np.stack([a, bx, by, cx, cy, d], axis=-1)


def quad_oracle_numeric(t: Terrain, restarts: int = 50, seed: int = 0, polish: bool = True,
                        min_step: float = 1e-7, max_iter: int = 4000,
                        directions: int = 24, polish_rounds: int = 1,
                        polish_iter: int = 1500) -> OracleResult:
    xs, ys = np.asarray(t.xs), np.asarray(t.ys)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    diam = t.diameter
    eye = np.eye(6)
    axes = np.concatenate([eye, -eye])
    Z = np.empty((restarts, 6))
    for k in range(restarts):
        a, d = np.sort(rng.uniform(xs[0], xs[-1], 2))
        bx, cx = np.sort(rng.uniform(a, d, 2))
        Z[k] = (a, bx, 1.0, cx, rng.uniform(0.2, 1.5), d)
    fz, Z = project_rows(Z, xs, ys)
    steps = np.full(restarts, diam / 4)
    evals = restarts
    it = 0
    while np.any(steps > min_step * diam) and it < max_iter:
        it += 1
        act = np.flatnonzero(steps > min_step * diam)
        rd = rng.normal(size=(len(act), directions, 6))
        rd /= np.linalg.norm(rd, axis=-1, keepdims=True)
        dirs = np.concatenate([np.broadcast_to(axes, (len(act), 12, 6)), rd], axis=1)
        cand = (Z[act, None, :] + steps[act, None, None] * dirs).reshape(-1, 6)
        fc, Cp = project_rows(cand, xs, ys)
        fc = fc.reshape(len(act), -1)
        Cp = Cp.reshape(len(act), -1, 6)
        evals += fc.size
        k = fc.argmax(axis=1)
        top = fc[np.arange(len(k)), k]
        imp = top > fz[act] * (1 + 1e-15)
        ii = act[imp]
        Z[ii] = Cp[np.flatnonzero(imp), k[imp]]
        fz[ii] = top[imp]
        steps[ii] *= 1.3
        steps[act[~imp]] *= 0.8
    z = Z[int(fz.argmax())]
    if polish:
        from scipy.optimize import minimize
        f = lambda p: -project_rows(p[None], xs, ys)[0][0]
        for _ in range(polish_rounds):
            res = minimize(f, z, method="Nelder-Mead",
                           options=dict(xatol=1e-13, fatol=1e-15, maxiter=polish_iter,
                                        adaptive=True))
            evals += res.nfev
            z = project_rows(res.x[None], xs, ys)[1][0]
    area, z = project_rows(z[None], xs, ys)
    z = z[0]
    q = Quad(Point(float(z[0]), 0.0), Point(float(z[1]), float(z[2])),
             Point(float(z[3]), float(z[4])), Point(float(z[5]), 0.0))
    return OracleResult(float(area[0]), q, NUMERIC, int(evals))


# --- rectangles ---------------------------------------------------------------

def rect_oracle(t: Terrain) -> OracleResult:
    """Scan every band between consecutive vertex heights.

    Inside a band each maximal interval with chain >= h is bounded by two
    fixed edges, so its width is linear in h and h * width(h) is a
    concave quadratic with a closed-form peak.
    """
    xs, ys = np.asarray(t.xs), np.asarray(t.ys)
    levels = np.unique(np.concatenate([[0.0], ys[1:-1]]))
    best, evals = Rect(float(xs[0]), float(xs[0]), 0.0), 0
    for h0, h1 in zip(levels[:-1], levels[1:]):
        hm = 0.5 * (h0 + h1)
        above = ys > hm
        k = 0
        while k < t.n:
            if not above[k]:
                k += 1
                continue
            i = k
            while k + 1 < t.n and above[k + 1]:
                k += 1
            j = k
            k += 1
            # run of vertices i..j above the band; walls on edges (i-1, i) and (j, j+1)
            def xl(h):
                return xs[i - 1] + (h - ys[i - 1]) * (xs[i] - xs[i - 1]) / (ys[i] - ys[i - 1])

            def xr(h):
                return xs[j] + (h - ys[j]) * (xs[j + 1] - xs[j]) / (ys[j + 1] - ys[j])
            w0, w1 = xr(h0) - xl(h0), xr(h1) - xl(h1)
            cands = [h0, h1]
            s = (w1 - w0) / (h1 - h0)
            if s < 0:
                hs = (s * h0 - w0) / (2 * s)
                if h0 < hs < h1:
                    cands.append(hs)
            for h in cands:
                evals += 1
                a = h * (xr(h) - xl(h))
                if a > best.area:
                    best = Rect(float(xl(h)), float(xr(h)), float(h))
    return OracleResult(best.area, best, RECT_SWEEP_BRUTE, evals)


def random_rect_lower_bound(t: Terrain, samples: int = 1000, seed: int = 0) -> float:
    """Largest contained rectangle among random (x_left, x_right, h) triples."""
    xs, ys = np.asarray(t.xs), np.asarray(t.ys)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    a = rng.uniform(xs[0], xs[-1], (samples, 2))
    xl, xr = a.min(axis=1), a.max(axis=1)
    h = rng.uniform(0, ys.max(), samples)
    inner = [(xs > lo) & (xs < hi) for lo, hi in zip(xl, xr)]
    floor = np.array([min(np.interp(lo, xs, ys), np.interp(hi, xs, ys),
                          ys[m].min() if m.any() else np.inf)
                      for lo, hi, m in zip(xl, xr, inner)])
    ok = h <= floor
    return float(np.max(np.where(ok, (xr - xl) * h, 0.0)))


# --- counterexample persistence --------------------------------------------

def persist_counterexample(t: Terrain, report: dict, directory, stem: Optional[str] = None) -> Path:
    """Write the terrain as JSON plus a sidecar report; returns the terrain path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    text = terrain_to_json(t)
    if stem is None:
        stem = "counterexample_" + hashlib.sha1(text.encode()).hexdigest()[:12]
    path = d / f"{stem}.json"
    path.write_text(text)
    (d / f"{stem}.report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return path
