import math

import pytest
from hypothesis import given, strategies as st

from terraquad.geometry_kernel import (BASE_LINE, Orientation, Point, Segment, Tolerance,
                                       base_foot, bisected_segment_through, cross,
                                       line_intersection, line_through, orientation,
                                       polygon_area, quad_area, vertical_projection)

coord = st.floats(-100, 100, allow_nan=False)


def test_orientation_signs():
    assert orientation((0, 0), (1, 0), (0, 1)) == Orientation.LEFT
    assert orientation((0, 0), (1, 0), (0, -1)) == Orientation.RIGHT
    assert orientation((0, 0), (1, 1), (2, 2)) == Orientation.COLLINEAR


def test_tolerance_positive():
    with pytest.raises(ValueError):
        Tolerance(0.0)


def test_polygon_area_trapezoid():
    assert polygon_area([(0, 0), (1, 2), (3, 2), (4, 0)]) == pytest.approx(6.0)
    assert quad_area((0, 0), (0.6, 1.2), (3.4, 1.2), (4, 0)) == pytest.approx(4.08, abs=1e-12)


def test_line_through_and_intersection():
    l1 = line_through((0, 0), (1, 2))
    l2 = line_through((4, 0), (3, 2))
    p = line_intersection(l1, l2)
    assert p.x == pytest.approx(2.0) and p.y == pytest.approx(4.0)
    assert base_foot(l2).x == pytest.approx(4.0)
    assert line_intersection(l1, line_through((1, 0), (2, 2))) is None
    assert line_intersection(BASE_LINE, line_through((0, 1), (1, 1))) is None


def test_line_slope_and_eval():
    ln = line_through((0, 0), (2, 1))
    assert ln.slope() == pytest.approx(0.5)
    assert ln.y_at(4) == pytest.approx(2.0)
    assert abs(ln.eval((6, 3))) < 1e-12


def test_bisected_segment_t4():
    # apex of y=2x and y=8-2x is (2, 4); the chord bisected at v3 is y = 1.2
    s = bisected_segment_through((2, 1.2), (2, 4), (-1, -2), (1, -2))
    assert s.a.x == pytest.approx(0.6) and s.a.y == pytest.approx(1.2)
    assert s.b.x == pytest.approx(3.4) and s.b.y == pytest.approx(1.2)


def test_bisected_segment_outside_wedge():
    assert bisected_segment_through((2, 5), (2, 4), (-1, -2), (1, -2)) is None


@given(coord, coord, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10),
       st.floats(0.1, 10), st.floats(0.05, 0.95), st.floats(0.1, 5))
def test_bisected_midpoint_property(ox, oy, d1x, d1y, d2x, d2y, lam, depth):
    o = (ox, oy)
    d1, d2 = (-d1x, -d1y), (d2x, -d2y)
    a = (ox + depth * lam * d1[0], oy + depth * lam * d1[1])
    b = (ox + depth * (1 - lam) * d2[0], oy + depth * (1 - lam) * d2[1])
    m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    s = bisected_segment_through(m, o, d1, d2)
    assert s is not None
    mid = s.midpoint()
    scale = max(1.0, abs(ox), abs(oy), depth * 10)
    assert math.dist(mid, m) <= 1e-12 * scale * 10


@given(coord, coord, coord, coord)
def test_cross_antisymmetric(ax, ay, bx, by):
    assert cross((0, 0), (ax, ay), (bx, by)) == -cross((0, 0), (bx, by), (ax, ay))


def test_segment_helpers():
    s = Segment(Point(0, 0), Point(3, 4))
    assert s.length() == 5.0
    assert s.midpoint() == Point(1.5, 2.0)
    assert vertical_projection((2, 7)) == Point(2, 0.0)
