"""Scenario files in and results trees out."""

from __future__ import annotations

import json

import numpy as np
import pytest

from evacsim import (OccupancyGrid, ScenarioFormatError, load_manifest,
                     load_scenario, manifest_dict, run_scenario,
                     save_results, save_scenario, scenario_from_dict,
                     scenario_to_dict)
from evacsim.results import occupancy_pgm, occupancy_text, trajectories_csv


def _small_doc(counts=(5, 5)):
    configs = []
    for label, n in zip("ab", counts):
        configs.append({
            "id": f"t-{label}",
            "environment": {"width": 14.0, "height": 14.0},
            "spawn_areas": [{"rect": {"x": 1.0, "y": 10.0, "w": 4.0,
                                      "h": 3.0},
                             "agent_count": n, "goal_id": "exit"}],
            "goals": [{"id": "exit", "center": {"x": 12.0, "y": 2.0},
                       "radius": 0.5}],
            "obstacles": [],
        })
    return {"name": "tiny", "configurations": configs}


def test_fixtures_round_trip(scenario_dir, tmp_path):
    for name in ("s1", "s2", "s3", "s4", "s5"):
        scenario = load_scenario(scenario_dir / f"{name}.json")
        assert scenario_from_dict(scenario_to_dict(scenario)) == scenario
        out = tmp_path / f"{name}.json"
        save_scenario(scenario, out)
        assert load_scenario(out) == scenario


def test_unknown_goal_reference_fails_to_parse():
    doc = _small_doc()
    doc["configurations"][0]["spawn_areas"][0]["goal_id"] = "nowhere"
    with pytest.raises(ScenarioFormatError, match="nowhere"):
        scenario_from_dict(doc)


def test_unknown_field_fails_to_parse():
    doc = _small_doc()
    doc["configurations"][0]["frobnicate"] = 1
    with pytest.raises(ScenarioFormatError, match="frobnicate"):
        scenario_from_dict(doc)


def test_missing_file_raises():
    with pytest.raises(FileNotFoundError):
        load_scenario("/nonexistent/h.json")
    with pytest.raises(FileNotFoundError, match="manifest"):
        load_manifest("/nonexistent")


def _keys(doc):
    out = set()
    if isinstance(doc, dict):
        for k, v in doc.items():
            out.add(k)
            out |= _keys(v)
    elif isinstance(doc, list):
        for v in doc:
            out |= _keys(v)
    return out


def test_manifest_is_deterministic():
    scenario = scenario_from_dict(_small_doc())
    blobs = []
    for _ in range(2):
        bundle = run_scenario(scenario, runs=2, seed=9)
        doc = manifest_dict(bundle, figures=False)
        blobs.append(json.dumps(doc, indent=2, sort_keys=True))
    assert blobs[0] == blobs[1]


def test_comparable_manifest_carries_scores_and_ranking():
    bundle = run_scenario(scenario_from_dict(_small_doc()), runs=2, seed=0)
    assert bundle.comparable
    doc = manifest_dict(bundle, figures=False)
    assert doc["comparable"] is True
    assert set(doc["ranking"]) == {"phi", "xi"}
    ids = [c["id"] for c in doc["configurations"]]
    assert ids == ["t-a", "t-b"]          # each config exactly once
    for entry in doc["configurations"]:
        assert len(entry["runs"]) == 2
        assert {"phi", "xi"} <= set(entry["aggregate"])


def test_non_comparable_manifest_withholds_scores():
    bundle = run_scenario(scenario_from_dict(_small_doc(counts=(5, 6))),
                          runs=1, seed=0)
    assert not bundle.comparable
    doc = manifest_dict(bundle, figures=False)
    keys = _keys(doc)
    assert "phi" not in keys and "xi" not in keys
    assert "ranking" not in doc
    assert doc["comparability"]["criteria"]["agent_total"] is False
    assert any("agent totals differ" in d
               for d in doc["comparability"]["details"])
    # records and aggregates still carry the raw metrics
    assert all(len(c["runs"]) == 1 for c in doc["configurations"])


def test_ten_run_manifest_keeps_every_record(s1_bundle):
    doc = manifest_dict(s1_bundle, figures=False)
    assert doc["runs"] == 10
    for entry in doc["configurations"]:
        assert len(entry["runs"]) == 10
        runs = [r["run"] for r in entry["runs"]]
        assert runs == list(range(10))


def test_results_tree_layout(tmp_path):
    bundle = run_scenario(scenario_from_dict(_small_doc(counts=(2, 2))),
                          runs=1, seed=0)
    out = tmp_path / "res"
    manifest_path = save_results(bundle, out, figures=True)
    assert manifest_path == out / "manifest.json"
    assert load_manifest(out) == manifest_dict(bundle, figures=True)
    assert (out / "comparison.csv").exists()
    for cid in ("t-a", "t-b"):
        cdir = out / "configs" / cid
        for fname in ("metrics.csv", "trajectories.csv", "agents.csv",
                      "occupancy.txt", "occupancy.pgm", "occupancy.png",
                      "trajectories.png"):
            assert (cdir / fname).exists(), fname
    header = (out / "configs" / "t-a" / "trajectories.csv").read_text()
    assert header.startswith("time,agent_id,x,y,speed")


def test_no_figures_skips_renders(tmp_path):
    bundle = run_scenario(scenario_from_dict(_small_doc(counts=(2, 2))),
                          runs=1, seed=0)
    out = tmp_path / "plain"
    save_results(bundle, out, figures=False)
    assert not (out / "configs" / "t-a" / "occupancy.png").exists()
    keys = _keys(load_manifest(out))
    assert "occupancy_png" not in keys


def test_occupancy_text_puts_top_row_first():
    counts = np.zeros((2, 2), dtype=int)
    counts[0, 0] = 3   # bottom-left cell
    counts[1, 1] = 7   # top-right cell
    text = occupancy_text(OccupancyGrid(cell=1.0, counts=counts))
    assert text.splitlines() == ["0 7", "3 0"]


def test_occupancy_pgm_shape_and_scale():
    # peak count maps to white; rows leave top-first like the text form
    counts = np.array([[0, 2], [4, 0]], dtype=int)
    blob = occupancy_pgm(OccupancyGrid(cell=1.0, counts=counts))
    assert blob == b"P5\n2 2\n255\n" + bytes([128, 0, 0, 255])


def test_trajectories_csv_lists_every_frame(s3c_trace):
    _, trace = s3c_trace
    text = trajectories_csv(trace)
    rows = text.strip().splitlines()
    assert rows[0] == "time,agent_id,x,y,speed"
    assert len(rows) - 1 == sum(len(fr.ids) for fr in trace.frames)
