import csv
import json
import shutil
import subprocess

import numpy as np
import pytest

from tlg.cli import main
from tlg.output import pgm_bytes, read_pgm, verify_manifest


def files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


@pytest.mark.parametrize("graph,code", [("minimal", 0), ("ladder", 0), ("crossing", 2), ("two_meets", 2), ("tree", 0)])
def test_verify_exit_codes(tmp_path, graph, code):
    out = tmp_path / graph
    assert main(["verify", graph, "--out", str(out)]) == code
    assert json.loads((out / "verdict.json").read_text())
    assert verify_manifest(out / "manifest.json") == []


def test_verify_prints_verdicts(tmp_path, capsys):
    main(["verify", "crossing", "--out", str(tmp_path / "o")])
    text = capsys.readouterr().out
    assert "TLG: yes" in text and "TLG*: no" in text


def test_verify_from_json_file(tmp_path):
    src = tmp_path / "g.json"
    src.write_text(json.dumps({
        "vertices": [{"id": 0, "time": 0.0}, {"id": 1, "time": 1.0}],
        "edges": [{"id": 0, "tail": 0, "head": 1}],
    }))
    assert main(["verify", str(src), "--out", str(tmp_path / "o")]) == 0


def test_bad_graph_is_error(tmp_path):
    src = tmp_path / "bad.json"
    src.write_text('{"vertices": [[0, 0.0]],\n "edges": [[0, 0, 9]]}')
    assert main(["verify", str(src), "--out", str(tmp_path / "o")]) == 1
    assert main(["verify", "no_such_fixture", "--out", str(tmp_path / "p")]) == 1


def test_refuses_overwrite_without_force(tmp_path):
    out = str(tmp_path / "o")
    assert main(["verify", "minimal", "--out", out]) == 0
    assert main(["verify", "minimal", "--out", out]) == 1
    assert main(["verify", "minimal", "--out", out, "--force"]) == 0


def test_seed_required(tmp_path, monkeypatch):
    monkeypatch.delenv("TLG_SEED", raising=False)
    assert main(["sample", "coupling", "--out", str(tmp_path / "a")]) == 1


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("TLG_SEED", "17")
    assert main(["sample", "coupling", "--out", str(tmp_path / "a")]) == 0
    assert main(["sample", "coupling", "--seed", "17", "--out", str(tmp_path / "b")]) == 0
    assert files(tmp_path / "a")["samples.csv"] == files(tmp_path / "b")["samples.csv"]
    m = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert m["seed"] == 17


@pytest.mark.parametrize("args", [
    ["sample", "nested", "--reps", "3"],
    ["she", "--n", "64"],
    ["rhombus", "--n", "16", "--window", "1,0.5", "--refine", "2"],
    ["gwtree", "--horizon", "1.5"],
    ["maxima", "--n-list", "1,3", "--reps", "200"],
    ["counterexample", "--mc-reps", "1000"],
])
def test_byte_identical_reruns(tmp_path, args):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main([*args, "--seed", "5", "--out", str(a)]) == 0
    assert main([*args, "--seed", "5", "--out", str(b)]) == 0
    assert files(a) == files(b)
    assert verify_manifest(a / "manifest.json") == []


def test_manifest_lists_every_file(tmp_path):
    out = tmp_path / "o"
    assert main(["covariance", "one_cell", "--per-edge", "2", "--out", str(out)]) == 0
    m = json.loads((out / "manifest.json").read_text())
    assert set(m["files"]) == {p.name for p in out.iterdir()} - {"manifest.json"}
    assert {"command", "config", "seed", "build"} <= set(m)
    (out / "covariance.csv").write_text("tampered\n")
    assert verify_manifest(out / "manifest.json") == ["covariance.csv"]


def test_cellcheck_codes(tmp_path):
    assert main(["cellcheck", "coupling", "--out", str(tmp_path / "a")]) == 0
    assert main(["cellcheck", "crossing", "--out", str(tmp_path / "b")]) == 2


def test_counterexample_table(tmp_path):
    out = tmp_path / "o"
    assert main(["counterexample", "--out", str(out)]) == 0
    rows = list(csv.DictReader((out / "table.csv").open()))
    assert float(rows[0]["engine"]) == pytest.approx(2 / 15, abs=1e-14)
    assert float(rows[0]["reference"]) == pytest.approx(1 / 3)


def test_pgm_round_trip(tmp_path):
    a = np.array([[0.0, 1.0, np.nan], [0.5, 0.25, 1.0]])
    p = tmp_path / "x.pgm"
    p.write_bytes(pgm_bytes(a))
    q = read_pgm(p)
    assert q.shape == (2, 3) and q[0, 1] == 255 and q[0, 2] == 0 and q[1, 0] == 128
    assert all(len(line) <= 70 for line in p.read_text().splitlines())


def test_unknown_command_is_error():
    assert main(["nope"]) == 1


@pytest.mark.skipif(shutil.which("tlg") is None, reason="console script not installed")
def test_console_script(tmp_path):
    r = subprocess.run(["tlg", "verify", "crossing", "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert r.returncode == 2
