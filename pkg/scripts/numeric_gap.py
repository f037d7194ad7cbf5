"""Numeric oracle vs structural oracle over the acceptance set.

Prints one line per instance where the numeric lower bound beats the
structural enumeration by more than the relative tolerance, and persists
each such instance under counterexamples/.

    python3 scripts/numeric_gap.py [--count 300] [--restarts 50] [--out counterexamples]
"""
import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from acceptance_set import acceptance_terrains  # noqa: E402

from terraquad.oracle import persist_counterexample, quad_oracle_numeric, quad_oracle_structural
from terraquad.quad_solver import max_quad


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--restarts", type=int, default=50)
    ap.add_argument("--rel-tol", type=float, default=1e-4)
    ap.add_argument("--out", default="counterexamples")
    ap.add_argument("--no-persist", action="store_true")
    a = ap.parse_args()
    t0 = time.time()
    worst = 0.0
    bad = []
    for k, (cfg, t) in enumerate(acceptance_terrains(a.count)):
        s = quad_oracle_structural(t)
        num = quad_oracle_numeric(t, restarts=a.restarts, seed=cfg.seed)
        gap = num.area / s.area - 1.0
        worst = max(worst, gap)
        if gap > a.rel_tol:
            rep = {"gen_config": cfg.to_dict(), "structural": s.area, "structural_family": s.family,
                   "numeric": num.area, "numeric_quad": num.solution.to_list(),
                   "solver": max_quad(t).area, "relative_gap": gap, "restarts": a.restarts,
                   "numeric_seed": cfg.seed}
            stem = f"numeric_gap_{cfg.profile.lower()}_n{cfg.n}_s{cfg.seed}"
            if not a.no_persist:
                persist_counterexample(t, rep, a.out, stem)
            bad.append(rep)
            print(f"{k:4d} {cfg.profile:12s} n={cfg.n:2d} structural={s.area:.9g} "
                  f"numeric={num.area:.9g} gap={gap:.3e}", flush=True)
    print(json.dumps({"instances": a.count, "violations": len(bad), "worst_gap": worst,
                      "seconds": time.time() - t0}))


if __name__ == "__main__":
    main()
