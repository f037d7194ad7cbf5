"""Persist the known instances where the numeric oracle beats the structural families.

In each one the optimal quadrilateral has a corner in the interior of a
terrain edge with neither adjacent side extremal nor balanced. The
sidecar report records the structural area, the solver area, and the
contained numeric quad that exceeds both.

    python3 scripts/ship_counterexamples.py [--out counterexamples] [--restarts 200]
"""
import argparse

from terraquad.oracle import persist_counterexample, quad_oracle_numeric, quad_oracle_structural
from terraquad.quad_solver import max_quad
from terraquad.terrain_model import contains_quad, validate

KNOWN = {
    "corner_gamma_on_edge": (
        [0, 0.16527635528529094, 0.4097352393619469, 2.697867137638703, 8.132702392002724,
         9.127555772777217, 10],
        [0, 3.2298609909523095, 3.7827345244279926, 2.946312461594403, 4.707825907044957,
         4.171340993546895, 0]),
    "top_exits_both_edges": (
        [0.0, 0.5925164234550362, 1.5019972907045187, 3.2303634625820665, 3.876318011107287,
         5.98184067207213, 8.163381038190757, 10.0],
        [0.0, 2.207507771976406, 4.904365479850497, 3.154962618547746, 3.222753142234331,
         3.370984613547495, 3.5440260971575475, 0.0]),
    "gap_1e-2_n10": (
        [0.0, 0.2519687080176036, 0.3035029438411163, 1.2289210220500935, 3.2216330978022514,
         3.7218527256520395, 5.476351992137353, 7.513249198549278, 9.671482353973676, 10.0],
        [0.0, 3.459923285173315, 2.4269911087526657, 2.8568304855971616, 4.427641438541485,
         2.0489480014821178, 3.156309420303716, 3.5765796800279466, 2.099361996605804, 0.0]),
    "gap_3e-2_n10": (
        [0.0, 0.6871535212186153, 2.5099924666475815, 4.116461499068884, 4.29996861901163,
         5.19514819877859, 8.781878594182805, 9.227595761684675, 9.509381955818498, 10.0],
        [0.0, 4.12717616267949, 3.54412039999367, 3.7268865692650532, 3.333299822780916,
         4.87202318807711, 1.997066566450962, 2.2922400185571674, 1.413102884960823, 0.0]),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="counterexamples")
    ap.add_argument("--restarts", type=int, default=200)
    a = ap.parse_args()
    for name, (xs, ys) in KNOWN.items():
        t = validate(list(zip(xs, ys)))
        s = quad_oracle_structural(t)
        num = quad_oracle_numeric(t, restarts=a.restarts, seed=0)
        q = num.solution
        rep = {"structural": s.area, "structural_family": s.family, "solver": max_quad(t).area,
               "numeric": num.area, "numeric_quad": q.to_list(),
               "numeric_quad_contained": contains_quad(t, q, 1e-9 * t.diameter),
               "relative_gap": num.area / s.area - 1.0, "restarts": a.restarts, "numeric_seed": 0}
        p = persist_counterexample(t, rep, a.out, name)
        print(f"{name:24s} structural={s.area:.9g} numeric={num.area:.9g} "
              f"gap={rep['relative_gap']:.3e} -> {p}")


if __name__ == "__main__":
    main()
