import json
import shutil
import subprocess
import sys
import xml.dom.minidom
from importlib import resources

import jsonschema
import pytest

from terraquad.cli import RunManifest, fit_slope, main

from conftest import T0_PTS, T4_PTS, TRI_PTS


def schema(name):
    doc = json.loads(resources.files("terraquad").joinpath("schemas/result.schema.json").read_text())
    return {"$ref": f"#/$defs/{name}", **{k: v for k, v in doc.items() if k != "$id"}}


def write(tmp_path, name, pts):
    p = tmp_path / name
    p.write_text(json.dumps({"vertices": [list(v) for v in pts]}))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_quad_t0(tmp_path, capsys):
    code, out, _ = run(capsys, "solve-quad", write(tmp_path, "t0.json", T0_PTS))
    assert code == 0
    d = json.loads(out)
    jsonschema.validate(d, schema("quad_result"))
    assert abs(d["area"] - 6) <= 1e-9 and d["degenerate_flag"] is False


def test_solve_quad_svg(tmp_path, capsys):
    svg = tmp_path / "t4.svg"
    code, out, _ = run(capsys, "solve-quad", write(tmp_path, "t4.json", T4_PTS), "--svg", str(svg))
    assert code == 0
    doc = xml.dom.minidom.parse(str(svg))
    classes = [e.getAttribute("class") for e in doc.getElementsByTagName("line")]
    assert "side top balanced" in classes and "side left extremal" in classes
    assert any("top: balanced" in t.firstChild.data for t in doc.getElementsByTagName("text"))


def test_solve_quad_errors(tmp_path, capsys):
    code, out, err = run(capsys, "solve-quad", write(tmp_path, "b.json", [(0, 0), (1, 2), (0.5, 3), (4, 0)]))
    assert code == 2 and "NOT_MONOTONE" in err and out == ""
    code, _, _ = run(capsys, "solve-quad", str(tmp_path / "missing.json"))
    assert code == 1
    (tmp_path / "junk.json").write_text("{not json")
    code, _, _ = run(capsys, "solve-quad", str(tmp_path / "junk.json"))
    assert code == 1


def test_solve_quad_triangle(tmp_path, capsys):
    code, out, _ = run(capsys, "solve-quad", write(tmp_path, "tri.json", TRI_PTS))
    assert code == 3 and json.loads(out)["degenerate_flag"] is True


def test_solve_rect(tmp_path, capsys):
    for pts, area in ((T0_PTS, 4.0), (T4_PTS, 3.36), (TRI_PTS, 2.0)):
        code, out, _ = run(capsys, "solve-rect", write(tmp_path, "t.json", pts))
        d = json.loads(out)
        jsonschema.validate(d, schema("rect_result"))
        assert code == 0 and abs(d["area"] - area) <= 1e-9


def test_manifest_roundtrip(tmp_path, capsys):
    f = write(tmp_path, "t4.json", T4_PTS)
    code, out, _ = run(capsys, "solve-quad", f, "--json", "--paranoid", "--eps", "1e-10")
    assert code == 0
    d = json.loads(out)
    jsonschema.validate(d, schema("manifest"))
    m = RunManifest.from_json(out)
    assert m.tolerances["eps"] == 1e-10 and m.flags["paranoid"] is True
    again = m.replay()
    assert abs(again["area"] - m.result["area"]) <= 1e-12
    code, out, _ = run(capsys, "solve-rect", f, "--json")
    m = RunManifest.from_json(out)
    assert m.replay()["area"] == m.result["area"]


def test_verify_t4(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", write(tmp_path, "t4.json", T4_PTS), "--structural", "--approx")
    assert code == 0
    rep = json.loads(out)["instances"][0]
    names = {c["name"] for c in rep["checks"]}
    assert {"quad_vs_structural", "half_approximation", "rect_vs_oracle",
            "pivot_ordering", "quad_mirror_invariant"} <= names
    assert rep["quad_area"] == pytest.approx(4.08) and rep["rect_area"] == pytest.approx(3.36)


def test_verify_batch(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--structural", "--approx", "--count", "12", "--seed", "500",
                       "--out-dir", str(tmp_path / "ce"))
    d = json.loads(out)
    assert code == 0 and d["count"] == 12 and d["failures"] == 0
    assert [r["index"] for r in d["instances"]] == list(range(12))


def test_verify_injected_tolerance(tmp_path, capsys):
    ce = tmp_path / "ce"
    code, out, _ = run(capsys, "verify", "--structural", "--count", "2", "--rel-tol", "-1",
                       "--out-dir", str(ce))
    assert code == 4
    assert len(list(ce.glob("*.report.json"))) == 2
    assert json.loads(out)["failures"] == 2


def test_gen_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, _, _ = run(capsys, "gen", "--n", "30", "--count", "3", "--seed", "4",
                         "--profile", "SAWTOOTH", "--out", str(d))
        assert code == 0
    fa = sorted(p.name for p in a.iterdir())
    assert len(fa) == 3
    for name in fa:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    code, out, _ = run(capsys, "gen", "--n", "6", "--seed", "1")
    assert len(json.loads(out)["vertices"]) == 6


def test_chords(tmp_path, capsys):
    code, out, _ = run(capsys, "chords", write(tmp_path, "t4.json", T4_PTS))
    d = json.loads(out)
    assert code == 0
    assert {(c["i"], c["j"]) for c in d["left"]} == {(0, 1), (0, 2), (2, 3)}
    assert d["spt_left"][0] == -1


def test_bench_small(capsys):
    code, out, err = run(capsys, "bench", "--sizes", "50", "100", "--reps", "1")
    d = json.loads(out)
    assert code == 0 and len(d["quad"]["median_seconds"]) == 2 and "slope" in d["rect"]
    assert "median" in err


def test_fit_slope():
    assert fit_slope([10, 100, 1000], [1, 100, 10000]) == pytest.approx(2.0)


@pytest.mark.skipif(shutil.which("terraquad") is None, reason="console script not installed")
def test_console_script(tmp_path):
    f = write(tmp_path, "t0.json", T0_PTS)
    p = subprocess.run(["terraquad", "solve-quad", f], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["area"] == 6.0
    p = subprocess.run([sys.executable, "-m", "terraquad.cli", "solve-rect", f],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["area"] == 4.0
