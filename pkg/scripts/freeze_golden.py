"""Freeze oracle values for literal golden instances into tests/data/golden.json.

Every area here comes from the oracles (structural enumeration, numeric
search, band-scan rectangle), never from the solvers under test.

    python3 scripts/freeze_golden.py
"""
import json
from pathlib import Path

from terraquad.instance_gen import PROFILES, GenConfig, generate
from terraquad.oracle import quad_oracle_numeric, quad_oracle_structural, rect_oracle
from terraquad.terrain_model import validate

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden.json"

HAND = {
    "T0": [(0, 0), (1, 2), (3, 2), (4, 0)],
    "T4": [(0, 0), (1, 2), (2, 1.2), (3, 2), (4, 0)],
    "triangle": [(0, 0), (2, 2), (4, 0)],
    "low_left_shoulder": [(0, 0), (1, 0.6), (2, 2), (4, 0)],
    "shoulder_peak": [(0, 0), (2, 0.5), (3, 2.5), (5, 0)],
}


def entry(name, t, cfg=None):
    s = quad_oracle_structural(t)
    num = quad_oracle_numeric(t, restarts=50, seed=0)
    r = rect_oracle(t)
    return {"name": name, "vertices": [[float(x), float(y)] for x, y in zip(t.xs, t.ys)],
            "gen_config": cfg, "quad_structural": s.area, "quad_structural_family": s.family,
            "quad_numeric": num.area, "rect_oracle": r.area}


def main():
    rows = [entry(k, validate(v)) for k, v in HAND.items()]
    for p in PROFILES:
        for n, seed in ((5, 101), (8, 202), (10, 303)):
            c = GenConfig(n=n, seed=seed, profile=p)
            rows.append(entry(f"{p.lower()}_n{n}_s{seed}", generate(c), c.to_dict()))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(rows, indent=1) + "\n")
    print(f"wrote {len(rows)} instances to {OUT}")


if __name__ == "__main__":
    main()
