"""Planar primitives with a single absolute tolerance."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Optional, Sequence

EPS = 1e-9


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point

    def midpoint(self) -> Point:
        return Point(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))

    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


class Line(NamedTuple):
    """A*x + B*y + C = 0 with A^2 + B^2 = 1."""
    A: float
    B: float
    C: float

    def eval(self, p) -> float:
        return self.A * p[0] + self.B * p[1] + self.C

    def y_at(self, x: float) -> float:
        return -(self.A * x + self.C) / self.B

    def slope(self) -> float:
        if self.B == 0.0:
            return math.inf
        return -self.A / self.B

    def direction(self) -> Point:
        """Unit direction with non-negative y (upward, or +x when horizontal)."""
        dx, dy = -self.B, self.A
        if dy < 0 or (dy == 0 and dx < 0):
            dx, dy = -dx, -dy
        return Point(dx, dy)


@dataclass(frozen=True)
class Tolerance:
    eps: float = EPS

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("tolerance must be positive")


class Orientation(IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


BASE_LINE = Line(0.0, 1.0, 0.0)


def cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(p, q, r, eps: float = EPS) -> Orientation:
    c = cross(p, q, r)
    scale = math.hypot(q[0] - p[0], q[1] - p[1]) * math.hypot(r[0] - p[0], r[1] - p[1])
    if abs(c) <= eps * scale:
        return Orientation.COLLINEAR
    return Orientation.LEFT if c > 0 else Orientation.RIGHT


def polygon_area(points: Sequence) -> float:
    if len(points) < 3:
        raise ValueError("polygon_area needs at least 3 points")
    s = 0.0
    m = len(points)
    for i in range(m):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % m]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2.0


def quad_area(a, b, c, d) -> float:
    # base corners on y = 0, so the shoelace sum shortens
    return 0.5 * abs((c[0] - a[0]) * (b[1] - d[1]) - (b[0] - d[0]) * (c[1] - a[1]))


def line_through(p, q) -> Line:
    A = q[1] - p[1]
    B = p[0] - q[0]
    nrm = math.hypot(A, B)
    if nrm == 0.0:
        raise ValueError("line_through needs two distinct points")
    A /= nrm
    B /= nrm
    return Line(A, B, -(A * p[0] + B * p[1]))


def line_point_dir(p, d) -> Line:
    return line_through(p, (p[0] + d[0], p[1] + d[1]))


def line_intersection(l1: Line, l2: Line, eps: float = EPS) -> Optional[Point]:
    det = l1.A * l2.B - l2.A * l1.B
    if abs(det) <= eps:
        return None
    x = (l1.B * l2.C - l2.B * l1.C) / det
    y = (l1.C * l2.A - l2.C * l1.A) / det
    return Point(x, y)


def base_foot(l: Line) -> Optional[Point]:
    """Intersection of a non-horizontal line with y = 0."""
    if l.A == 0.0:
        return None
    return Point(-l.C / l.A, 0.0)


def bisected_segment_through(m, o, d1, d2) -> Optional[Segment]:
    """Segment with endpoints on rays o+s*d1, o+t*d2 (s, t > 0) and midpoint m."""
    det = d1[0] * d2[1] - d1[1] * d2[0]
    if det == 0.0:
        return None
    rx = 2.0 * (m[0] - o[0])
    ry = 2.0 * (m[1] - o[1])
    s = (rx * d2[1] - ry * d2[0]) / det
    t = (d1[0] * ry - d1[1] * rx) / det
    if s <= 0 or t <= 0:
        return None
    a = Point(o[0] + s * d1[0], o[1] + s * d1[1])
    b = Point(o[0] + t * d2[0], o[1] + t * d2[1])
    return Segment(a, b)


def vertical_projection(p) -> Point:
    return Point(p[0], 0.0)
