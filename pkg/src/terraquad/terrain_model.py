"""Terrain container, validation, containment predicates and file formats."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .geometry_kernel import EPS, Point, Segment, polygon_area, quad_area


class ValidationError(ValueError):
    """Rejection naming the violated invariant."""

    def __init__(self, code: str, index=None, detail: str = ""):
        self.code = code
        self.index = index
        msg = code
        if index is not None:
            msg += f" at index {index}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class Terrain:
    """Validated x-monotone chain; v1 and vn on y = 0."""

    __slots__ = ("xs", "ys", "eps")

    def __init__(self, xs, ys, eps: float = EPS):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.xs.flags.writeable = False
        self.ys.flags.writeable = False
        self.eps = eps

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def vertices(self) -> list:
        return [Point(float(x), float(y)) for x, y in zip(self.xs, self.ys)]

    def vertex(self, i: int) -> Point:
        return Point(float(self.xs[i]), float(self.ys[i]))

    @property
    def width(self) -> float:
        return float(self.xs[-1] - self.xs[0])

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, float(self.ys.max()))

    def area(self) -> float:
        return polygon_area(self.vertices)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Terrain(n={self.n})"

    def __eq__(self, other):
        return (isinstance(other, Terrain) and np.array_equal(self.xs, other.xs)
                and np.array_equal(self.ys, other.ys))

    def __hash__(self):
        return hash((self.xs.tobytes(), self.ys.tobytes()))


@dataclass(frozen=True)
class Quad:
    """Clockwise from the leftmost corner; alpha and delta on y = 0."""
    alpha: Point
    beta: Point
    gamma: Point
    delta: Point

    @property
    def area(self) -> float:
        return quad_area(self.alpha, self.beta, self.gamma, self.delta)

    @property
    def points(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def mirrored(self, x_end: float) -> "Quad":
        f = lambda p: Point(x_end - p[0], p[1])
        return Quad(f(self.delta), f(self.gamma), f(self.beta), f(self.alpha))

    def to_list(self) -> list:
        return [[p[0], p[1]] for p in self.points]


@dataclass(frozen=True)
class Rect:
    x_left: float
    x_right: float
    height: float

    @property
    def area(self) -> float:
        return (self.x_right - self.x_left) * self.height

    @property
    def corners(self) -> tuple:
        return (Point(self.x_left, 0.0), Point(self.x_left, self.height),
                Point(self.x_right, self.height), Point(self.x_right, 0.0))


def collinear_triples(xs, ys, eps, first_only: bool = False) -> list:
    """Triples (i, j, k) whose |sin| of the angle at i is at most eps.

    Per anchor i, directions to all later vertices are sorted by angle;
    only angularly adjacent pairs can be near-collinear.
    """
    n = len(xs)
    out = []
    for i in range(n - 2):
        dx = xs[i + 1:] - xs[i]
        dy = ys[i + 1:] - ys[i]
        ang = np.arctan2(dy, dx)  # dx > 0 so ang in (-pi/2, pi/2)
        order = np.argsort(ang, kind="stable")
        close = np.flatnonzero(np.diff(ang[order]) <= 2 * eps)
        for c in close:
            j, k = sorted((int(order[c]) + i + 1, int(order[c + 1]) + i + 1))
            a = (xs[j] - xs[i], ys[j] - ys[i])
            b = (xs[k] - xs[i], ys[k] - ys[i])
            cr = a[0] * b[1] - a[1] * b[0]
            if abs(cr) <= eps * math.hypot(*a) * math.hypot(*b):
                out.append((i, j, k))
                if first_only:
                    return out
    return out


def validate(raw: Sequence, eps: float = EPS, check_triples: bool = True) -> Terrain:
    pts = [(float(p[0]), float(p[1])) for p in raw]
    n = len(pts)
    if n < 3:
        raise ValidationError("TOO_FEW_VERTICES", None, f"got {n}")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValidationError("NOT_MONOTONE", int(np.flatnonzero(~np.isfinite(xs + ys))[0]),
                              "non-finite coordinate")
    bad = np.flatnonzero(np.diff(xs) <= eps)
    if len(bad):
        raise ValidationError("NOT_MONOTONE", int(bad[0]) + 1)
    if abs(ys[0]) > eps:
        raise ValidationError("BASE_NOT_ZERO", 0)
    if abs(ys[-1]) > eps:
        raise ValidationError("BASE_NOT_ZERO", n - 1)
    low = np.flatnonzero(ys[1:-1] <= eps)
    if len(low):
        raise ValidationError("BASE_NOT_ZERO", int(low[0]) + 1, "interior vertex not above base")
    ys[0] = ys[-1] = 0.0
    if check_triples:
        t = collinear_triples(xs, ys, eps, first_only=True)
        if t:
            raise ValidationError("COLLINEAR_TRIPLE", t[0])
    return Terrain(xs, ys, eps)


def chain_height_at(t: Terrain, x: float) -> float:
    if x < t.xs[0] - t.eps or x > t.xs[-1] + t.eps:
        raise ValueError(f"x={x} outside base range")
    return float(np.interp(x, t.xs, t.ys))


def contains_segment(t: Terrain, a, b, eps: Optional[float] = None) -> bool:
    eps = t.eps if eps is None else eps
    if a[1] < -eps or b[1] < -eps:
        return False
    if a[0] > b[0]:
        a, b = b, a
    if a[0] < t.xs[0] - eps or b[0] > t.xs[-1] + eps:
        return False
    if a[1] > np.interp(a[0], t.xs, t.ys) + eps or b[1] > np.interp(b[0], t.xs, t.ys) + eps:
        return False
    dx = b[0] - a[0]
    if dx <= 0:
        return True
    lo = np.searchsorted(t.xs, a[0], side="right")
    hi = np.searchsorted(t.xs, b[0], side="left")
    if hi <= lo:
        return True
    vx = t.xs[lo:hi]
    sy = a[1] + (b[1] - a[1]) * (vx - a[0]) / dx
    return bool(np.all(sy <= t.ys[lo:hi] + eps))


def contains_quad(t: Terrain, q: Quad, eps: Optional[float] = None) -> bool:
    return (contains_segment(t, q.alpha, q.beta, eps)
            and contains_segment(t, q.beta, q.gamma, eps)
            and contains_segment(t, q.gamma, q.delta, eps))


def contains_rect(t: Terrain, r: Rect, eps: Optional[float] = None) -> bool:
    eps = t.eps if eps is None else eps
    if r.x_left < t.xs[0] - eps or r.x_right > t.xs[-1] + eps:
        return False
    return contains_segment(t, (r.x_left, r.height), (r.x_right, r.height), eps)


def quad_shape_ok(q: Quad, eps: float = EPS) -> bool:
    """Base on y = 0, x-ordered corners, convex clockwise, left slope > 0, right slope < 0."""
    a, b, c, d = q.points
    if abs(a[1]) > eps or abs(d[1]) > eps or not a[0] < d[0]:
        return False
    if not (b[1] > eps and c[1] > eps):
        return False
    if not (b[0] > a[0] and c[0] < d[0] and b[0] <= c[0] + eps):
        return False
    pts = q.points
    for i in range(4):
        p0, p1, p2 = pts[i - 1], pts[i], pts[(i + 1) % 4]
        cr = (p1[0] - p0[0]) * (p2[1] - p1[1]) - (p1[1] - p0[1]) * (p2[0] - p1[0])
        if cr > eps * max(1.0, abs(p1[0] - p0[0]) + abs(p2[0] - p1[0])):
            return False
    return True


def mirror(t: Terrain) -> Terrain:
    x_end = t.xs[-1]
    return Terrain((x_end - t.xs[::-1]) + t.xs[0], t.ys[::-1].copy(), t.eps)


def mirror_point(t: Terrain, p) -> Point:
    return Point(t.xs[-1] + t.xs[0] - p[0], p[1])


# --- file formats -------------------------------------------------------

def terrain_to_json(t: Terrain) -> str:
    verts = ", ".join(f"[{float(x)!r}, {float(y)!r}]" for x, y in zip(t.xs, t.ys))
    return '{"vertices": [' + verts + ']}\n'


def terrain_to_text(t: Terrain) -> str:
    lines = [str(t.n)] + [f"{float(x)!r} {float(y)!r}" for x, y in zip(t.xs, t.ys)]
    return "\n".join(lines) + "\n"


def parse_terrain(text: str) -> list:
    s = text.lstrip()
    if s.startswith("{"):
        obj = json.loads(s)
        return [tuple(map(float, v)) for v in obj["vertices"]]
    rows = [ln.split() for ln in s.splitlines() if ln.strip()]
    n = int(rows[0][0])
    pts = [(float(r[0]), float(r[1])) for r in rows[1:1 + n]]
    if len(pts) != n:
        raise ValueError(f"expected {n} vertex lines, found {len(pts)}")
    return pts


def load_terrain(path, eps: float = EPS) -> Terrain:
    return validate(parse_terrain(Path(path).read_text()), eps)


def save_terrain(t: Terrain, path) -> None:
    path = Path(path)
    text = terrain_to_text(t) if path.suffix in (".txt", ".dat") else terrain_to_json(t)
    path.write_text(text)
