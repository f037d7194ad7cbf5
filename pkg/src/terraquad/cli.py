"""terraquad command line.

stdout carries only the JSON payload; diagnostics go to stderr.
Exit codes: 0 ok, 1 I/O or format error, 2 invalid terrain,
3 degenerate optimum, 4 verification disagreement.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .candidate_chords import candidate_edges, shortest_path_tree
from .geometry_kernel import EPS, Tolerance
from .instance_gen import PROFILES, GenConfig, generate
from .terrain_model import (Terrain, ValidationError, contains_quad, contains_rect, mirror,
                            parse_terrain, save_terrain, terrain_to_json, validate)

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_DEGENERATE, EXIT_DISAGREE = 0, 1, 2, 3, 4
QUAD_REL_TOL = 1e-6
NUMERIC_REL_TOL = 1e-4
RECT_TOL = 1e-9
APPROX_TOL = 1e-9
BENCH_SIZES = (100, 200, 400, 800, 1600, 3200)


@dataclass
class RunManifest:
    command: str
    input: Optional[str] = None
    gen_config: Optional[dict] = None
    terrain: Optional[list] = None
    tolerances: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))

    def replay(self) -> dict:
        """Re-run a solve command on the embedded terrain; returns its result payload."""
        t = validate(self.terrain, self.tolerances.get("eps", EPS))
        if self.command == "solve-quad":
            return _quad_payload(t, bool(self.flags.get("paranoid")))[0]
        if self.command == "solve-rect":
            return _rect_payload(t)
        raise ValueError(f"cannot replay {self.command!r}")


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _load(path: str, eps: float) -> Terrain:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e}")
    try:
        raw = parse_terrain(text)
    except (ValueError, KeyError, IndexError, TypeError) as e:
        raise CliError(EXIT_IO, f"cannot parse {path}: {e}")
    try:
        return validate(raw, eps)
    except ValidationError as e:
        raise CliError(EXIT_INVALID, str(e))


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _note(msg: str) -> None:
    sys.stderr.write(msg + "\n")


# --- payloads -------------------------------------------------------------------

def _quad_payload(t: Terrain, paranoid: bool):
    from .quad_solver import max_quad
    rep = max_quad(t, paranoid=paranoid)
    d = rep.to_dict()
    payload = {"area": d["area"], "vertices": d["vertices"], "pass": d["pass"],
               "structure": d["structure"], "degenerate_flag": d["degenerate_flag"],
               "best_proper": d["best_proper"], "stats": d["stats"]}
    return payload, rep


def _rect_payload(t: Terrain) -> dict:
    from .rect_solver import max_rect
    r = max_rect(t)
    return {"x_left": r.x_left, "x_right": r.x_right, "height": r.height, "area": r.area}


# --- commands ---------------------------------------------------------------------

def cmd_solve_quad(a) -> int:
    t = _load(a.file, a.eps)
    t0 = time.perf_counter()
    payload, rep = _quad_payload(t, a.paranoid)
    dt = time.perf_counter() - t0
    outputs = {}
    if a.svg:
        from .render import render_svg
        _write(a.svg, render_svg(t, rep.best, rep.structure, title=f"area {rep.area:.6g}"))
        outputs["svg"] = a.svg
    if a.json:
        m = RunManifest("solve-quad", input=a.file, terrain=[list(v) for v in t.vertices],
                        tolerances={"eps": a.eps}, flags={"paranoid": a.paranoid},
                        outputs=outputs, timing={"seconds": dt}, stats=payload["stats"],
                        result=payload)
        sys.stdout.write(m.to_json() + "\n")
    else:
        _emit(payload)
    if rep.best is None or rep.degenerate_flag:
        _note("optimum is degenerate (a triangle or near-triangle)")
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_solve_rect(a) -> int:
    t = _load(a.file, a.eps)
    t0 = time.perf_counter()
    payload = _rect_payload(t)
    dt = time.perf_counter() - t0
    outputs = {}
    if a.svg:
        from .rect_solver import max_rect
        from .render import render_svg
        _write(a.svg, render_svg(t, rect=max_rect(t), title=f"area {payload['area']:.6g}"))
        outputs["svg"] = a.svg
    if a.json:
        m = RunManifest("solve-rect", input=a.file, terrain=[list(v) for v in t.vertices],
                        tolerances={"eps": a.eps}, outputs=outputs, timing={"seconds": dt},
                        result=payload)
        sys.stdout.write(m.to_json() + "\n")
    else:
        _emit(payload)
    return EXIT_OK if payload["area"] > 0 else EXIT_DEGENERATE


def _instances(a):
    if a.file:
        yield a.file, None, _load(a.file, a.eps)
        return
    for k in range(a.count):
        n = a.n if a.n else 4 + k % 7
        prof = a.profile if a.profile else PROFILES[k % len(PROFILES)]
        cfg = GenConfig(n=n, seed=a.seed + k, profile=prof)
        yield None, cfg.to_dict(), generate(cfg)


def verify_instance(t: Terrain, structural: bool, approx: bool, numeric: bool,
                    rel_tol: float = QUAD_REL_TOL, seed: int = 0) -> dict:
    """Run the solvers against every applicable oracle; returns a report with per-check flags."""
    from .oracle import STRUCTURAL_MAX_N, quad_oracle_numeric, quad_oracle_structural, rect_oracle
    from .quad_solver import balanced_pivots, max_quad
    from .rect_solver import inscribed_half_rectangle, max_rect
    checks = []

    def check(name, ok, **detail):
        checks.append({"name": name, "ok": bool(ok), **detail})

    rep = max_quad(t)
    area = rep.area
    scale = max(1.0, t.diameter)
    if rep.best is not None:
        check("quad_contained", contains_quad(t, rep.best, 1e-7 * scale))
    mrep = max_quad(mirror(t))
    check("quad_mirror_invariant", abs(mrep.area - area) <= 1e-9 * max(1.0, area),
          area=area, mirrored=mrep.area)
    r = max_rect(t)
    ro = rect_oracle(t)
    check("rect_vs_oracle", abs(r.area - ro.area) <= RECT_TOL * max(1.0, ro.area),
          solver=r.area, oracle=ro.area)
    check("rect_contained", contains_rect(t, r, 1e-7 * scale))
    check("rect_mirror_invariant", abs(max_rect(mirror(t)).area - r.area) <= 1e-9 * max(1.0, r.area))
    pivots = 0
    try:
        for tt in (t, mirror(t)):
            for rc in candidate_edges(tt)[1]:
                pivots += len(balanced_pivots(tt, rc))
        check("pivot_ordering", True, pivots=pivots)
    except AssertionError as e:
        check("pivot_ordering", False, error=str(e))
    ref = None
    if structural and t.n <= STRUCTURAL_MAX_N:
        so = quad_oracle_structural(t)
        ref = so.area
        check("quad_vs_structural", abs(area - so.area) <= rel_tol * max(1.0, so.area),
              solver=area, structural=so.area, family=so.family)
    if numeric:
        no = quad_oracle_numeric(t, restarts=50, seed=seed)
        base = ref if ref is not None else area
        check("numeric_below_reference", no.area <= base * (1 + NUMERIC_REL_TOL),
              numeric=no.area, reference=base)
    if approx:
        check("half_approximation", r.area >= 0.5 * area - APPROX_TOL, rect=r.area, quad=area)
        if rep.best_proper is not None:
            w = inscribed_half_rectangle(rep.best_proper)
            check("half_rect_witness", w.area >= 0.5 * rep.best_proper.area - APPROX_TOL
                  and contains_rect(t, w, 1e-7 * scale), witness=w.area)
    return {"n": t.n, "quad_area": area, "rect_area": r.area,
            "degenerate_flag": rep.degenerate_flag, "checks": checks,
            "ok": all(c["ok"] for c in checks)}


def cmd_verify(a) -> int:
    from .oracle import persist_counterexample
    reports = []
    failures = 0
    for k, (path, cfg, t) in enumerate(_instances(a)):
        rep = verify_instance(t, a.structural, a.approx, a.numeric, a.rel_tol, seed=a.seed + k)
        rep["index"] = k
        rep["input"] = path
        rep["gen_config"] = cfg
        if not rep["ok"]:
            failures += 1
            p = persist_counterexample(t, rep, a.out_dir)
            rep["persisted"] = str(p)
            _note(f"disagreement on instance {k}; persisted to {p}")
        reports.append(rep)
    _emit({"instances": reports, "count": len(reports), "failures": failures})
    return EXIT_DISAGREE if failures else EXIT_OK


def cmd_gen(a) -> int:
    prof = a.profile or "RANDOM_WALK"
    n = a.n or 10
    try:
        cfgs = [GenConfig(n=n, seed=a.seed + k, profile=prof) for k in range(a.count)]
    except ValueError as e:
        raise CliError(EXIT_INVALID, str(e))
    ts = [generate(c) for c in cfgs]
    if a.out is None:
        if len(ts) == 1:
            sys.stdout.write(terrain_to_json(ts[0]))
        else:
            _emit([json.loads(terrain_to_json(t)) for t in ts])
        return EXIT_OK
    out = Path(a.out)
    if a.count == 1 and out.suffix:
        save_terrain(ts[0], out)
        paths = [str(out)]
    else:
        out.mkdir(parents=True, exist_ok=True)
        ext = ".txt" if a.format == "txt" else ".json"
        paths = []
        for c, t in zip(cfgs, ts):
            p = out / f"terrain_{c.profile.lower()}_n{c.n}_s{c.seed}{ext}"
            save_terrain(t, p)
            paths.append(str(p))
    _emit({"files": paths, "configs": [c.to_dict() for c in cfgs]})
    return EXIT_OK


def fit_slope(sizes, seconds) -> float:
    return float(np.polyfit(np.log(sizes), np.log(seconds), 1)[0])


def run_bench(sizes=BENCH_SIZES, reps: int = 5, seed: int = 0, profile: str = "RANDOM_WALK",
              solvers=("quad", "rect")) -> dict:
    from .quad_solver import max_quad
    from .rect_solver import max_rect
    fns = {"quad": lambda t: max_quad(t), "rect": lambda t: max_rect(t)}
    warm = generate(GenConfig(n=20, seed=seed, profile=profile))
    for s in solvers:
        fns[s](warm)
    out = {"sizes": list(sizes), "reps": reps, "profile": profile, "seed": seed}
    terrains = [generate(GenConfig(n=n, seed=seed, profile=profile)) for n in sizes]
    for s in solvers:
        med = []
        for n, t in zip(sizes, terrains):
            ts = []
            for _ in range(reps):
                t0 = time.perf_counter()
                fns[s](t)
                ts.append(time.perf_counter() - t0)
            med.append(float(np.median(ts)))
            _note(f"{s:5s} n={n:5d} median {med[-1]:.4f}s")
        out[s] = {"median_seconds": med, "slope": fit_slope(sizes, med)}
        _note(f"{s:5s} log-log slope {out[s]['slope']:.3f}")
    return out


def cmd_bench(a) -> int:
    sizes = tuple(a.sizes) if a.sizes else BENCH_SIZES
    solvers = ("quad", "rect") if a.solver == "both" else (a.solver,)
    _emit(run_bench(sizes, a.reps, a.seed, a.profile or "RANDOM_WALK", solvers))
    return EXIT_OK


def cmd_chords(a) -> int:
    t = _load(a.file, a.eps)
    CL, CR = candidate_edges(t)

    def row(c):
        return {"i": c.i, "j": c.j, "foot": list(c.foot), "tip": list(c.tip),
                "tip_edge": c.tip_edge, "slope_sign": c.slope_sign}
    _emit({"left": [row(c) for c in CL], "right": [row(c) for c in CR],
           "spt_left": list(shortest_path_tree(t, "LEFT_BASE").parent),
           "spt_right": list(shortest_path_tree(t, "RIGHT_BASE").parent)})
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="terraquad",
                                description="Largest base-anchored quadrilateral and rectangle "
                                            "inside a 1.5D terrain.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=Tolerance().eps,
                        help="validation tolerance (default %(default)g)")
    common.add_argument("--rel-tol", type=float, default=QUAD_REL_TOL,
                        help="solver vs structural oracle relative tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--profile", choices=PROFILES, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-quad", parents=[common], help="maximum-area quadrilateral")
    s.add_argument("file")
    s.add_argument("--svg", metavar="PATH")
    s.add_argument("--json", action="store_true", help="print the full run manifest")
    s.add_argument("--paranoid", action="store_true", help="rebuild hulls per pair")
    s.set_defaults(fn=cmd_solve_quad)

    s = sub.add_parser("solve-rect", parents=[common], help="maximum-area rectangle")
    s.add_argument("file")
    s.add_argument("--svg", metavar="PATH")
    s.add_argument("--json", action="store_true", help="print the full run manifest")
    s.set_defaults(fn=cmd_solve_rect)

    s = sub.add_parser("verify", parents=[common], help="check solvers against oracles")
    s.add_argument("file", nargs="?")
    s.add_argument("--count", type=int, default=1, help="generated instances when no file")
    s.add_argument("--structural", action="store_true")
    s.add_argument("--approx", action="store_true")
    s.add_argument("--numeric", action="store_true", help="also run the numeric oracle")
    s.add_argument("--out-dir", default="counterexamples")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("gen", parents=[common], help="generate terrains")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--out", "-o", default=None, help="file (count 1) or directory")
    s.add_argument("--format", choices=("json", "txt"), default="json")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("bench", parents=[common], help="timing table and log-log slopes")
    s.add_argument("--sizes", type=int, nargs="+")
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--solver", choices=("quad", "rect", "both"), default="both")
    s.set_defaults(fn=cmd_bench)

    s = sub.add_parser("chords", parents=[common], help="dump candidate edges")
    s.add_argument("file")
    s.set_defaults(fn=cmd_chords)
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.fn(a)
    except CliError as e:
        _note(str(e))
        return e.code


if __name__ == "__main__":
    sys.exit(main())
