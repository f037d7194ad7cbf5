import json

import numpy as np
import pytest

from terraquad._oracle_kernels import project_rows
from terraquad.geometry_kernel import polygon_area
from terraquad.instance_gen import PROFILES, GenConfig, generate
from terraquad.oracle import (NUMERIC, RECT_SWEEP_BRUTE, STRUCTURAL, STRUCTURAL_MAX_N, _project,
                              persist_counterexample, quad_oracle_numeric,
                              quad_oracle_structural, random_rect_lower_bound, rect_oracle)
from terraquad.terrain_model import contains_quad, contains_rect, quad_shape_ok, validate

from conftest import load_golden


def test_structural_examples(T0, T4):
    r = quad_oracle_structural(T0)
    assert r.method == STRUCTURAL and abs(r.area - 6.0) <= 1e-12
    r = quad_oracle_structural(T4)
    assert abs(r.area - 4.08) <= 1e-12
    assert r.solution.beta == pytest.approx((0.6, 1.2))


def test_structural_convex_container():
    t = validate([(0, 0), (1, 3), (3, 4), (5, 3), (6, 0)])
    # the whole terrain is convex; the best quad drops one vertex
    r = quad_oracle_structural(t)
    assert r.area <= polygon_area(t.vertices) + 1e-12
    assert r.area == pytest.approx(max(
        polygon_area([(0, 0), (1, 3), (3, 4), (6, 0)]),
        polygon_area([(0, 0), (1, 3), (5, 3), (6, 0)]),
        polygon_area([(0, 0), (3, 4), (5, 3), (6, 0)])))


def test_structural_size_guard():
    t = generate(GenConfig(n=STRUCTURAL_MAX_N + 1, seed=0))
    with pytest.raises(ValueError):
        quad_oracle_structural(t)


def test_structural_self_check():
    for s in range(12):
        t = generate(GenConfig(n=4 + s % 7, seed=s, profile=PROFILES[s % 4]))
        r = quad_oracle_structural(t)
        sc = max(1.0, t.diameter)
        assert contains_quad(t, r.solution, 1e-7 * sc)
        assert r.solution.alpha.y == 0.0 and r.solution.delta.y == 0.0


def test_numeric_examples(T0, T4):
    r = quad_oracle_numeric(T0, restarts=50)
    assert r.method == NUMERIC and r.area >= 6 - 1e-4
    assert quad_oracle_numeric(T4, restarts=50).area >= 4.08 - 1e-4


def test_numeric_is_feasible_and_deterministic():
    t = generate(GenConfig(n=8, seed=11, profile="PEAKS"))
    a = quad_oracle_numeric(t, restarts=10, seed=3)
    b = quad_oracle_numeric(t, restarts=10, seed=3)
    assert a.area == b.area
    assert contains_quad(t, a.solution, 1e-9 * t.diameter)
    assert quad_shape_ok(a.solution, 1e-7 * t.diameter)


def test_numeric_golden_consistency():
    # frozen numeric bounds never exceed frozen structural values by much on hand instances
    for g in load_golden()[:5]:
        assert g["quad_numeric"] <= g["quad_structural"] * (1 + 1e-4), g["name"]


def test_projection_matches_reference():
    rng = np.random.default_rng(1)
    t = generate(GenConfig(n=9, seed=2))
    Z = rng.uniform(-10, 110, (500, 6))
    Z[:, [2, 4]] = rng.uniform(-5, 60, (500, 2))
    a1, p1 = _project(Z, t.xs, t.ys)
    a2, p2 = project_rows(Z, t.xs, t.ys)
    assert np.array_equal(a1, a2) and np.array_equal(p1, p2)


@pytest.mark.parametrize("pts,area", [
    ([(0, 0), (1, 2), (3, 2), (4, 0)], 4.0),
    ([(0, 0), (1, 2), (2, 1.2), (3, 2), (4, 0)], 3.36),
    ([(0, 0), (2, 2), (4, 0)], 2.0),
])
def test_rect_oracle_examples(pts, area):
    r = rect_oracle(validate(pts))
    assert r.method == RECT_SWEEP_BRUTE and abs(r.area - area) <= 1e-12


def test_rect_oracle_beats_random_sampling():
    for s in range(20):
        t = generate(GenConfig(n=5 + s, seed=s, profile=PROFILES[s % 4]))
        r = rect_oracle(t)
        assert contains_rect(t, r.solution, 1e-9 * t.diameter)
        assert r.area >= random_rect_lower_bound(t, 1000, seed=s) - 1e-9


def test_persist_counterexample(tmp_path, T4):
    p = persist_counterexample(T4, {"why": "test"}, tmp_path)
    assert validate(json.loads(p.read_text())["vertices"]) == T4
    side = p.with_name(p.stem + ".report.json")
    assert json.loads(side.read_text()) == {"why": "test"}
    assert persist_counterexample(T4, {}, tmp_path) == p  # stable name
