"""Acceptance criteria, each at its stated tolerance.

Every test prints one line "CRITERION k ... PASS|FAIL" to the terminal.
"""
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from terraquad import _kernels as K
from terraquad.butterfly import _hull_arrays, chord_row, is_single_peak, wedge_areas
from terraquad.candidate_chords import candidate_edges, candidate_edges_brute
from terraquad.cli import BENCH_SIZES, run_bench
from terraquad.instance_gen import PROFILES, GenConfig, generate
from terraquad.oracle import quad_oracle_numeric, quad_oracle_structural, rect_oracle
from terraquad.quad_solver import balanced_pivots, max_quad
from terraquad.rect_solver import inscribed_half_rectangle, max_rect, witness_case
from terraquad.terrain_model import contains_rect, mirror, validate

from conftest import T0_PTS, T4_PTS, random_quad

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
from acceptance_set import acceptance_terrains  # noqa: E402


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}")
    return emit


@pytest.fixture(scope="module")
def quad_set():
    """The 300 seeded instances with solver and structural results, computed once."""
    rows = []
    t_solver = t_oracle = 0.0
    for cfg, t in acceptance_terrains(300):
        a = time.perf_counter()
        rep = max_quad(t)
        b = time.perf_counter()
        o = quad_oracle_structural(t)
        c = time.perf_counter()
        t_solver += b - a
        t_oracle += c - b
        rows.append({"cfg": cfg, "t": t, "rep": rep, "structural": o.area})
    return {"rows": rows, "t_solver": t_solver, "t_oracle": t_oracle}


def _timed(f, reps=5):
    f()
    ts = []
    for _ in range(reps):
        a = time.perf_counter()
        out = f()
        ts.append(time.perf_counter() - a)
    return out, statistics.median(ts)


def test_criterion_1_golden(report):
    T0, T4 = validate(T0_PTS), validate(T4_PTS)
    q0, tq0 = _timed(lambda: max_quad(T0))
    r0, tr0 = _timed(lambda: max_rect(T0))
    q4, tq4 = _timed(lambda: max_quad(T4))
    r4, tr4 = _timed(lambda: max_rect(T4))
    chord = (q4.best.beta, q4.best.gamma)
    ok = (abs(q0.area - 6) <= 1e-9 and abs(r0.area - 4) <= 1e-9
          and abs(q4.area - 4.08) <= 1e-9 and abs(r4.area - 3.36) <= 1e-9
          and math.dist(chord[0], (0.6, 1.2)) <= 1e-9 and math.dist(chord[1], (3.4, 1.2)) <= 1e-9
          and q4.structure["top"] == "balanced"
          and max(tq0, tr0, tq4, tr4) < 0.010)
    report(1, ok, f"T0 quad={q0.area!r} rect={r0.area!r}; T4 quad={q4.area!r} rect={r4.area!r} "
                  f"top={q4.structure['top']}; median ms quad {tq0*1e3:.2f}/{tq4*1e3:.2f} "
                  f"rect {tr0*1e3:.2f}/{tr4*1e3:.2f}")
    assert ok


def test_criterion_2_structural_equivalence(quad_set, report):
    rows = quad_set["rows"]
    bad = [r for r in rows
           if abs(r["rep"].area - r["structural"]) > 1e-6 * max(1.0, r["structural"])]
    profiles = {r["cfg"].profile for r in rows}
    ns = {r["cfg"].n for r in rows}
    total = quad_set["t_solver"] + quad_set["t_oracle"]
    ok = not bad and len(rows) == 300 and profiles == set(PROFILES) and ns == set(range(4, 11)) \
        and total < 120
    report(2, ok, f"{len(rows)} instances, {len(bad)} mismatches, solver {quad_set['t_solver']:.1f}s "
                  f"+ oracle {quad_set['t_oracle']:.1f}s")
    assert ok


def test_criterion_3_numeric_completeness(quad_set, report):
    worst, viol = 0.0, []
    for r in quad_set["rows"]:
        num = quad_oracle_numeric(r["t"], restarts=50, seed=r["cfg"].seed)
        gap = num.area / r["structural"] - 1.0
        worst = max(worst, gap)
        if gap > 1e-4:
            viol.append((r["cfg"].seed, gap))
    ok = not viol
    report(3, ok, f"{len(viol)} of 300 instances where numeric beats structural by > 1e-4 "
                  f"(worst {worst:.3e}); seeds {[s for s, _ in viol]}")
    assert ok


def test_criterion_4_rect(report):
    a = time.perf_counter()
    bad = 0
    worst = 0.0
    sizes = []
    for k in range(300):
        n = 3 + (k * 197) % 198  # spans 3..200
        t = generate(GenConfig(n=n, seed=10_000 + k, profile=PROFILES[k % 4]))
        sizes.append(n)
        d = abs(max_rect(t).area - rect_oracle(t).area)
        worst = max(worst, d)
        bad += d > 1e-9
    el = time.perf_counter() - a
    ok = bad == 0 and el < 60 and max(sizes) == 200
    report(4, ok, f"300 terrains n 3..{max(sizes)}, {bad} mismatches, worst |diff| {worst:.2e}, "
                  f"{el:.1f}s")
    assert ok


def test_criterion_5_half_approximation(quad_set, report):
    inst = [validate(T0_PTS), validate(T4_PTS)] + [r["t"] for r in quad_set["rows"]]
    low = 0
    for t in inst:
        rep = max_quad(t)
        if max_rect(t).area < 0.5 * rep.area - 1e-9:
            low += 1
    rng = np.random.default_rng(20)
    cases = {"i": 0, "ii": 0}
    wit_bad = 0
    for k in range(1000):
        q = random_quad(rng, equal_tops=(k % 2 == 1))
        r = inscribed_half_rectangle(q)
        cases[witness_case(q)] += 1
        qt = validate([q.alpha, q.beta, q.gamma, q.delta], check_triples=False)
        if not (r.area >= 0.5 * q.area - 1e-9 and contains_rect(qt, r, 1e-9)):
            wit_bad += 1
    ok = low == 0 and wit_bad == 0 and min(cases.values()) >= 300
    report(5, ok, f"rect >= quad/2 on {len(inst)} instances ({low} violations); witness on 1000 "
                  f"quads case i {cases['i']} / case ii {cases['ii']}, {wit_bad} failures")
    assert ok


def _pairs(count):
    s = 0
    out = []
    while len(out) < count:
        t = generate(GenConfig(n=8 + s % 20, seed=s, profile=PROFILES[s % 4]))
        s += 1
        CL, CR = candidate_edges(t)
        for l in CL:
            for r in CR:
                if l.foot.x < r.foot.x and l.tip.x < r.tip.x:
                    out.append((t, l, r))
    return out


def test_criterion_6_invariants(quad_set, report):
    # midpoint error of bisected chords over solver wedges
    errs = []
    pairs = _pairs(2500)
    for t, l, r in pairs:
        if len(errs) >= 1000:
            break
        hx, hy = _hull_arrays(t, l, r)
        lr, rr = chord_row(l), chord_row(r)
        ox, oy = K._apex(lr, rr)
        for k in range(1, len(hx) - 1):
            ok, bx, by, gx, gy = K._balanced_top(hx[k], hy[k], ox, oy, lr, rr)
            if ok:
                errs.append(math.hypot(0.5 * (bx + gx) - hx[k], 0.5 * (by + gy) - hy[k]))
    mid_ok = len(errs) >= 1000 and max(errs) <= 1e-12
    # single peak on 100 random (l, r) pairs with a feasible wedge
    rng = np.random.default_rng(6)
    feas = [p for p in pairs if any(a >= 0 for a in wedge_areas(*p))]
    pick = [feas[i] for i in rng.choice(len(feas), 100, replace=False)]
    peaks = sum(is_single_peak(wedge_areas(*p), 1e-9 * max(1.0, max(wedge_areas(*p)))) for p in pick)
    # candidate sets vs brute force
    cand_bad = 0
    for s in range(100):
        t = generate(GenConfig(n=4 + s % 47, seed=s, profile=PROFILES[s % 4]))
        CL, CR = candidate_edges(t)
        BL, BR = candidate_edges_brute(t)
        cand_bad += ({e.key for e in CL} != {e.key for e in BL}
                     or {e.key for e in CR} != {e.key for e in BR})
    # pivot orderings (raises on violation) and mirror invariance over the verify runs
    calls = 0
    order_bad = 0
    mir_bad = 0
    for row in quad_set["rows"]:
        t = row["t"]
        for tt in (t, mirror(t)):
            for r in candidate_edges(tt)[1]:
                calls += 1
                try:
                    balanced_pivots(tt, r)
                except AssertionError:
                    order_bad += 1
        qa, ra = row["rep"].area, max_rect(t).area
        mir_bad += abs(max_quad(mirror(t)).area - qa) > 1e-9 * max(1.0, qa)
        mir_bad += abs(max_rect(mirror(t)).area - ra) > 1e-9 * max(1.0, ra)
    ok = mid_ok and peaks == 100 and cand_bad == 0 and order_bad == 0 and mir_bad == 0
    report(6, ok, f"midpoint max err {max(errs):.2e} over {len(errs)} wedges; single peak "
                  f"{peaks}/100; candidate mismatches {cand_bad}/100; pivot-order violations "
                  f"{order_bad} in {calls} calls; mirror violations {mir_bad}")
    assert ok


def test_criterion_7_complexity(report):
    b = run_bench(BENCH_SIZES, reps=5, seed=0)
    t = generate(GenConfig(n=2000, seed=1))
    a = time.perf_counter()
    max_quad(t)
    t2000 = time.perf_counter() - a
    sq, sr = b["quad"]["slope"], b["rect"]["slope"]
    ok = 1.7 <= sq <= 2.5 and 0.9 <= sr <= 1.4 and t2000 < 30
    report(7, ok, f"quad slope {sq:.3f}, rect slope {sr:.3f}, quad n=2000 {t2000:.2f}s; "
                  f"quad medians {[round(x, 4) for x in b['quad']['median_seconds']]}")
    assert ok


def test_criterion_8_paranoid(report):
    bad = 0
    for k in range(50):
        t = generate(GenConfig(n=4 + (k * 37) % 97, seed=700 + k, profile=PROFILES[k % 4]))
        bad += max_quad(t, paranoid=True).area != max_quad(t).area
    report(8, bad == 0, f"{bad} of 50 instances (n <= 100) differ between one-ended and rebuilt hulls")
    assert bad == 0
