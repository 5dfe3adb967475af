import json
import os
import subprocess

import pytest

CLI = os.environ.get("GEONET_CLI", "geonet")


def run(*args, check=True):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def test_generate_fail_cascade(tmp_path):
    graph = tmp_path / "g.json"
    run("generate", "--n", "1600", "--width", "25", "--height", "25", "--seed", "7", "--out", str(graph))
    doc = json.loads(graph.read_text())
    assert len(doc["points"]) == 1600
    assert doc["meta"]["seed"] == 7
    assert "adjacency" not in doc

    out = json.loads(run("fail", "--graph", str(graph), "--rule", "attack:4", "--seed", "1").stdout)
    assert all(a == (d <= 4) for a, d in zip(out["alive"], out["degrees"]))
    again = json.loads(run("fail", "--graph", str(graph), "--rule", "attack:4", "--seed", "2").stdout)
    assert again["alive"] == out["alive"]

    casc = json.loads(run("cascade", "--graph", str(graph), "--dist",
                          "pieces:0,0.1,7.5;0.1,1,0.2777777778", "--seed-node", "0", "--seed", "3").stdout)
    assert casc["rounds"][0] == [0]
    assert casc["failed_count"] == sum(casc["failed"])


def test_missing_seed_is_reported(tmp_path):
    proc = run("generate", "--n", "10", "--width", "5", "--height", "5", "--out", str(tmp_path / "g.json"))
    assert proc.stderr.startswith("seed: ")


def test_sweep_formats(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"kind": "percolation-sweep", "lambdas": [1.0, 2.0], "trials": 4}))
    doc = json.loads(run("sweep", "--config", str(config), "--seed", "5", "--format", "json").stdout)
    assert doc["seed"] == 5 and doc["proxy"] == "crossing"
    csv = run("sweep", "--config", str(config), "--seed", "5", "--format", "csv").stdout.splitlines()
    rows = [line for line in csv if not line.startswith("#")]
    assert rows[0] == "point,label,parameter,estimate,stderr,trials,successes"
    for row, point in zip(rows[1:], doc["points"]):
        cells = row.split(",")
        assert float(cells[3]) == point["estimate"]


def test_theory_commands():
    phi = json.loads(run("theory", "critical-phi", "--lambda", "10").stdout)
    assert phi["phi"] == 0
    q = json.loads(run("theory", "critical-q", "--lambda", "1.0").stdout)
    assert q["q_c"] is None and q["subcritical"]
    circ = json.loads(run("theory", "enumerate-circuits", "--m", "4").stdout)
    assert circ["count"] == 22


@pytest.mark.parametrize("args,needle", [
    (["fail", "--graph", "missing.json", "--rule", "attack:4"], "missing.json"),
    (["theory", "k0", "--lambda", "1", "--d", "3"], "d must be > 4"),
    (["theory", "critical-phi", "--lambda", "abc"], "lambda"),
])
def test_errors(args, needle):
    proc = run(*args, check=False)
    assert proc.returncode != 0
    assert needle in proc.stderr


def test_invalid_points_are_named(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"region": {"width": 2, "height": 2, "boundary": "open-box"},
                               "radius": 1, "points": [[0.5, 0.5], [3, 1]]}))
    proc = run("fail", "--graph", str(bad), "--rule", "indep:0.1", "--seed", "1", check=False)
    assert proc.returncode == 1
    assert "points[1]" in proc.stderr
