"""The command line front end, exercised through real subprocesses."""

from __future__ import annotations

import json
import subprocess
import sys
import threading
import time

import pytest


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "evacsim.cli", *args],
                          capture_output=True, text=True, cwd=cwd,
                          timeout=570)


def _config_doc(cid, agents, width=14.0):
    return {
        "id": cid,
        "environment": {"width": width, "height": 14.0},
        "spawn_areas": [{"rect": {"x": 1.0, "y": 10.0, "w": 4.0, "h": 3.0},
                         "agent_count": agents, "goal_id": "exit"}],
        "goals": [{"id": "exit", "center": {"x": 12.0, "y": 2.0},
                   "radius": 0.5}],
        "obstacles": [],
    }


def _write(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_validate_fixture(scenario_dir, tmp_path):
    result = _cli("validate", str(scenario_dir / "s1.json"), cwd=tmp_path)
    assert result.returncode == 0
    assert "OK, 3 configurations, comparable" in result.stdout


def test_validate_reports_mismatches(tmp_path):
    doc = {"name": "odd", "configurations": [_config_doc("a", 5),
                                             _config_doc("b", 6)]}
    result = _cli("validate", _write(tmp_path / "odd.json", doc),
                  cwd=tmp_path)
    assert result.returncode == 0
    assert "not comparable" in result.stdout
    assert "agent totals differ" in result.stdout


def test_missing_file_is_input_error(tmp_path):
    result = _cli("run", "missing.json", cwd=tmp_path)
    assert result.returncode == 1
    assert result.stderr.startswith("error:")
    assert "file not found" in result.stderr


def test_too_many_configurations_rejected(tmp_path):
    doc = {"name": "big", "configurations": [_config_doc(f"c{i}", 5)
                                             for i in range(5)]}
    result = _cli("run", _write(tmp_path / "big.json", doc), cwd=tmp_path)
    assert result.returncode == 1
    assert "caps at 4" in result.stderr


def test_unfinishable_run_exits_two(tmp_path):
    # a 780 m march cannot finish inside the 600 s cutoff
    doc = {"name": "march", "configurations": [{
        "id": "far",
        "environment": {"width": 800.0, "height": 4.0},
        "spawn_areas": [{"rect": {"x": 0.5, "y": 1.0, "w": 1.0, "h": 2.0},
                         "agent_count": 1, "goal_id": "exit"}],
        "goals": [{"id": "exit", "center": {"x": 798.0, "y": 2.0},
                   "radius": 0.5}],
        "obstacles": [],
    }]}
    result = _cli("run", _write(tmp_path / "march.json", doc),
                  "--out", str(tmp_path / "march-out"), "--no-figures",
                  cwd=tmp_path)
    assert result.returncode == 2
    assert "incomplete" in result.stderr


def test_run_full_summary_and_figures(scenario_dir, tmp_path):
    out = tmp_path / "out"
    result = _cli("run", str(scenario_dir / "s1.json"), "--runs", "10",
                  "--seed", "7", "--out", str(out), cwd=tmp_path)
    assert result.returncode == 0, result.stderr

    assert "comparable: yes" in result.stdout
    assert "[PHI] best: " in result.stdout
    assert "[XI] best: " in result.stdout
    order_line = next(l for l in result.stdout.splitlines()
                      if l.startswith("[PHI]"))
    assert " < " in order_line

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["runs"] == 10 and manifest["seed"] == 7
    assert [c["id"] for c in manifest["configurations"]] == ["s1-a", "s1-b",
                                                             "s1-c"]
    assert all(len(c["runs"]) == 10 for c in manifest["configurations"])
    for cid in ("s1-a", "s1-b", "s1-c"):
        assert (out / "configs" / cid / "occupancy.png").exists()
        assert (out / "configs" / cid / "trajectories.png").exists()

    compare = _cli("compare", str(out), cwd=tmp_path)
    assert compare.returncode == 0
    assert "[PHI] best: " in compare.stdout


def test_non_comparable_run_withholds_scores(tmp_path):
    doc = {"name": "odd", "configurations": [_config_doc("a", 5),
                                             _config_doc("b", 5, width=15.0)]}
    out = tmp_path / "odd-out"
    result = _cli("run", _write(tmp_path / "odd.json", doc),
                  "--out", str(out), "--no-figures", cwd=tmp_path)
    assert result.returncode == 0
    assert "comparable: no" in result.stdout
    assert "environment sizes differ" in result.stdout
    assert "[PHI]" not in result.stdout

    compare = _cli("compare", str(out), cwd=tmp_path)
    assert compare.returncode == 0
    assert "not comparable; phi/xi withheld" in compare.stdout


def test_serve_binds_an_ephemeral_port(tmp_path):
    proc = subprocess.Popen(
        [sys.executable, "-m", "evacsim.cli", "serve", "--port", "0"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
        cwd=tmp_path)
    lines = []

    def read():
        for line in proc.stdout:
            lines.append(line.strip())
            if line.strip() == "ready":
                return

    reader = threading.Thread(target=read, daemon=True)
    reader.start()
    reader.join(timeout=30)
    try:
        assert lines, "server printed nothing"
        assert lines[0].startswith("listening on http://127.0.0.1:")
        port = int(lines[0].rsplit(":", 1)[1])
        assert port > 0
        assert "ready" in lines
    finally:
        proc.terminate()
        proc.wait(timeout=10)
