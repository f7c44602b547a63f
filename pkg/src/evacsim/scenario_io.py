"""Scenario file format: strict JSON with path-tracked diagnostics.

Layout:

    {"name": ..., "configurations": [{
        "id": ..., "environment": {"width", "height"},
        "spawn_areas": [{"rect": {"x","y","w","h"}, "agent_count", "goal_id"}],
        "goals": [{"id", "center": {"x","y"}, "radius"}],
        "obstacles": [{"center": {"x","y"}, "size": {"w","h"}, "rotation"}]}]}

Unknown fields are rejected so typos fail loudly instead of being ignored.
``obstacles`` may be omitted for open layouts. Loading also validates every
configuration; a file that parses but cannot be simulated is still an error.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .geometry import Rect, Vec2
from .scenario import Configuration, Environment, Goal, Obstacle, Scenario, SpawnArea
from .validation import validate_configuration

__all__ = ["ScenarioFormatError", "load_scenario", "save_scenario",
           "scenario_from_dict", "scenario_to_dict"]


class ScenarioFormatError(ValueError):
    """Malformed scenario document; message names the offending path."""


def _fail(path: str, msg: str):
    raise ScenarioFormatError(f"{path}: {msg}")


def _expect_dict(value, path: str, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    unknown = set(value) - allowed
    if unknown:
        _fail(path, f"unknown field(s) {sorted(unknown)}")
    missing = required - set(value)
    if missing:
        _fail(path, f"missing required field(s) {sorted(missing)}")
    return value


def _number(value, path: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        _fail(path, "number must be finite")
    if positive and v <= 0:
        _fail(path, f"must be positive, got {v}")
    return v


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {type(value).__name__}")
    return value


def _string(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        _fail(path, "expected a non-empty string")
    return value


def _point(value, path: str) -> Vec2:
    d = _expect_dict(value, path, {"x", "y"}, {"x", "y"})
    return Vec2(_number(d["x"], f"{path}.x"), _number(d["y"], f"{path}.y"))


def _parse_config(value, path: str) -> Configuration:
    d = _expect_dict(value, path,
                     {"id", "environment", "spawn_areas", "goals", "obstacles"},
                     {"id", "environment", "spawn_areas", "goals"})
    cid = _string(d["id"], f"{path}.id")
    env_d = _expect_dict(d["environment"], f"{path}.environment",
                         {"width", "height"}, {"width", "height"})
    env = Environment(_number(env_d["width"], f"{path}.environment.width", True),
                      _number(env_d["height"], f"{path}.environment.height", True))

    goals = []
    if not isinstance(d["goals"], list) or not d["goals"]:
        _fail(f"{path}.goals", "expected a non-empty array")
    for gi, g in enumerate(d["goals"]):
        gp = f"{path}.goals[{gi}]"
        gd = _expect_dict(g, gp, {"id", "center", "radius"}, {"id", "center", "radius"})
        goals.append(Goal(_string(gd["id"], f"{gp}.id"),
                          _point(gd["center"], f"{gp}.center"),
                          _number(gd["radius"], f"{gp}.radius", True)))
    goal_ids = {g.id for g in goals}
    if len(goal_ids) != len(goals):
        _fail(f"{path}.goals", "goal ids must be unique")

    if not isinstance(d["spawn_areas"], list) or not d["spawn_areas"]:
        _fail(f"{path}.spawn_areas", "expected a non-empty array")
    areas = []
    for ai, a in enumerate(d["spawn_areas"]):
        ap = f"{path}.spawn_areas[{ai}]"
        ad = _expect_dict(a, ap, {"rect", "agent_count", "goal_id"},
                          {"rect", "agent_count", "goal_id"})
        rd = _expect_dict(ad["rect"], f"{ap}.rect", {"x", "y", "w", "h"},
                          {"x", "y", "w", "h"})
        rect = Rect(_number(rd["x"], f"{ap}.rect.x"),
                    _number(rd["y"], f"{ap}.rect.y"),
                    _number(rd["w"], f"{ap}.rect.w", True),
                    _number(rd["h"], f"{ap}.rect.h", True))
        count = _integer(ad["agent_count"], f"{ap}.agent_count")
        if count < 1:
            _fail(f"{ap}.agent_count", f"must be >= 1, got {count}")
        goal_id = _string(ad["goal_id"], f"{ap}.goal_id")
        if goal_id not in goal_ids:
            _fail(f"{ap}.goal_id", f"references missing goal '{goal_id}'")
        areas.append(SpawnArea(rect, count, goal_id))

    obstacles = []
    for oi, o in enumerate(d.get("obstacles", [])):
        op = f"{path}.obstacles[{oi}]"
        od = _expect_dict(o, op, {"center", "size", "rotation"}, {"center", "size"})
        sd = _expect_dict(od["size"], f"{op}.size", {"w", "h"}, {"w", "h"})
        obstacles.append(Obstacle(
            center=_point(od["center"], f"{op}.center"),
            size=(_number(sd["w"], f"{op}.size.w", True),
                  _number(sd["h"], f"{op}.size.h", True)),
            rotation=_number(od.get("rotation", 0.0), f"{op}.rotation"),
        ))

    return Configuration(cid, env, tuple(areas), tuple(goals), tuple(obstacles))


def scenario_from_dict(doc: dict) -> Scenario:
    """Parse and fully validate an in-memory scenario document."""
    d = _expect_dict(doc, "$", {"name", "configurations"}, {"name", "configurations"})
    name = _string(d["name"], "$.name")
    if not isinstance(d["configurations"], list) or not d["configurations"]:
        _fail("$.configurations", "expected a non-empty array")
    configs = [_parse_config(c, f"$.configurations[{i}]")
               for i, c in enumerate(d["configurations"])]
    try:
        scenario = Scenario(name, tuple(configs))
    except ValueError as exc:
        _fail("$.configurations", str(exc))

    for i, config in enumerate(scenario.configurations):
        report = validate_configuration(config)
        if not report.ok:
            _fail(f"$.configurations[{i}]",
                  f"configuration '{config.id}' is invalid: "
                  + "; ".join(report.violations))
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    def point(p: Vec2):
        return {"x": p.x, "y": p.y}

    return {
        "name": scenario.name,
        "configurations": [
            {
                "id": c.id,
                "environment": {"width": c.environment.width,
                                "height": c.environment.height},
                "spawn_areas": [
                    {"rect": {"x": a.rect.x, "y": a.rect.y,
                              "w": a.rect.w, "h": a.rect.h},
                     "agent_count": a.agent_count,
                     "goal_id": a.goal_id} for a in c.spawn_areas],
                "goals": [
                    {"id": g.id, "center": point(g.center), "radius": g.radius}
                    for g in c.goals],
                "obstacles": [
                    {"center": point(o.center),
                     "size": {"w": o.size[0], "h": o.size[1]},
                     "rotation": o.rotation} for o in c.obstacles],
            } for c in scenario.configurations],
    }


def load_scenario(path: str | Path) -> Scenario:
    """Read, parse, and validate a scenario file."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_dict(doc)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write a scenario as deterministic, diff-friendly JSON."""
    text = json.dumps(_round_floats(scenario_to_dict(scenario)),
                      indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _round_floats(obj):
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj
