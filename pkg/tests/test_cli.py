from __future__ import annotations

import json
import subprocess
import sys

import pytest

from digitop.cli import run
from digitop.geometry import Cover
from digitop.graph_core import DigitalSpace


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def sphere_file(tmp_path, capsys):
    path = tmp_path / "sphere.json"
    assert run(["construct", "--kind", "minimal-sphere", "--n", "2", "-o", str(path)]) == 0
    return path


def test_construct_then_invariants(sphere_file, capsys):
    code, out, _ = call(capsys, "invariants", "--graph", str(sphere_file))
    assert code == 0
    d = json.loads(out)
    assert d["euler"] == 2 and d["betti_gf2"] == [1, 0, 1] and d["normal_dimension"] == 2


def test_construct_output_round_trips(sphere_file):
    data = json.loads(sphere_file.read_text())
    cover = Cover.from_json_dict(data["cover"])
    assert cover.to_json_dict() == data["cover"]
    assert DigitalSpace.from_json_dict(data["graph"]).to_json_dict() == data["graph"]


def test_verify(sphere_file, capsys):
    assert call(capsys, "verify", "--graph", str(sphere_file), "--dim", "2")[0] == 0
    code, out, _ = call(capsys, "verify", "--graph", str(sphere_file), "--dim", "1")
    assert code == 1 and json.loads(out)["is_normal"] is False


def test_certify_brick_and_grid(tmp_path, capsys):
    bricks, grid = tmp_path / "b.json", tmp_path / "g.json"
    run(["construct", "--kind", "brick", "-o", str(bricks)])
    run(["construct", "--kind", "brick", "--offset", "0", "-o", str(grid)])
    code, out, _ = call(capsys, "certify", "--cover", str(bricks))
    assert code == 0 and json.loads(out)["lcl"]["passed"]
    code, out, _ = call(capsys, "certify", "--cover", str(grid))
    d = json.loads(out)
    assert code == 1
    assert len(d["lcl"]["witness"]["indices"]) == 4
    assert d["consistency"]["witness"]["reason"] == "wrong-intersection-dimension"
    assert any(not lump["passed"] for lump in d["lumps"])


def test_construct_rejected_circle(capsys):
    code, out, _ = call(capsys, "construct", "--kind", "circle", "--s", "3")
    assert code == 1
    assert json.loads(out)["certificate"]["witness"]["indices"] == [0, 1, 2]


def test_surfaces(capsys):
    code, out, _ = call(capsys, "construct", "--kind", "klein")
    assert code == 0 and json.loads(out)["graph"]["vertices"] == 16


def test_experiment_csv(tmp_path, capsys):
    csv_path = tmp_path / "t.csv"
    code, out, _ = call(capsys, "experiment", "--object", "circle", "--h0", "1", "--levels", "4",
                        "--csv", str(csv_path), "--out-dir", str(tmp_path / "levels"))
    assert code == 0
    d = json.loads(out)
    assert d["stabilization_index"] is not None
    rows = csv_path.read_text().splitlines()
    assert rows[-1].split(",")[4:] == ["0", "1", "1", "1"] == rows[-2].split(",")[4:]
    assert (tmp_path / "levels" / "level3.graph.json").exists()


def test_experiment_single_level_is_not_stable(capsys):
    assert call(capsys, "experiment", "--object", "circle", "--h0", "1", "--levels", "1")[0] == 1


def test_digitize_with_window(capsys):
    code, out, _ = call(capsys, "digitize", "--object", "disk", "--h", "1/2", "--window=-2:2,-2:2", "--lcl")
    d = json.loads(out)
    assert code == 0 and d["lcl"]["passed"] and d["report"]["euler"] == 1


def test_reduce_equiv_export(tmp_path, capsys):
    c6, c7 = tmp_path / "c6.json", tmp_path / "c7.json"
    run(["construct", "--kind", "circle", "--s", "6", "-o", str(c6)])
    run(["construct", "--kind", "circle", "--s", "7", "-o", str(c7)])
    code, out, _ = call(capsys, "equiv", "--graph-a", str(c6), "--graph-b", str(c7), "--budget", "2")
    assert code == 0 and len(json.loads(out)["moves"]) == 2
    code, out, _ = call(capsys, "equiv", "--graph-a", str(c6), "--graph-b", str(c7), "--budget", "1")
    assert code == 1
    code, out, _ = call(capsys, "reduce", "--graph", str(c6))
    assert code == 0 and json.loads(out)["moves"] == []
    code, out, _ = call(capsys, "export", "--graph", str(c6), "--format", "dot")
    assert out.startswith("graph G {") and out.count("--") == 6


@pytest.mark.parametrize("argv, flag", [
    (["construct", "--kind", "bogus"], "--kind"),
    (["verify", "--graph", "/no/such/file", "--dim", "1"], "/no/such/file"),
    (["digitize", "--object", "circle", "--h", "3/4", "--window=-1:1,-1:1"], "--h"),
    (["digitize", "--object", "circle", "--h", "x"], "--h"),
    (["experiment", "--object", "ball", "--h0", "1", "--levels", "2", "--window=0:1"], "--window"),
    ([], "command"),
])
def test_usage_errors(capsys, argv, flag):
    code, _, err = call(capsys, *argv)
    assert code == 2 and flag in err


def test_bad_json_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(capsys, "invariants", "--graph", str(bad))
    assert code == 2 and "not valid JSON" in err


def test_module_entry_point_pipes():
    made = subprocess.run([sys.executable, "-m", "digitop", "construct", "--kind", "minimal-sphere", "--n", "2"],
                          capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "digitop", "invariants", "--graph", "-"],
                         input=made.stdout, capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["euler"] == 2
