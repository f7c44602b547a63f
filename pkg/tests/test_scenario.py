"""Comparability rules, configuration copies, and reference agent choice."""

from __future__ import annotations

import dataclasses
import itertools
import math

import pytest

from evacsim import (Configuration, Environment, Goal, Obstacle, Rect,
                     SpawnArea, Vec2, check_comparability,
                     deep_copy_configuration, select_reference_agent)


def _config(cid, width=30.0, height=30.0, counts=(10,), extra_goals=0,
            obstacles=()):
    goals = [Goal(id="exit", center=Vec2(28.0, 2.0), radius=0.5)]
    goals += [Goal(id=f"side{i}", center=Vec2(5.0 + 2.0 * i, 5.0), radius=0.5)
              for i in range(extra_goals)]
    spawns = [SpawnArea(rect=Rect(1.0 + 7.0 * i, 23.0, 6.0, 6.0),
                        agent_count=c, goal_id="exit")
              for i, c in enumerate(counts)]
    return Configuration(id=cid, environment=Environment(width, height),
                         spawn_areas=spawns, goals=goals, obstacles=obstacles)


def test_split_spawn_totals_are_comparable():
    # 10 agents in one area vs 5 + 5 across two: totals match, so it passes
    a = _config("a", counts=(10,))
    b = _config("b", counts=(5, 5))
    verdict = check_comparability([a, b])
    assert verdict.comparable
    assert verdict.criteria == {"agent_total": True, "goal_count": True,
                                "surface_area": True}
    assert verdict.details == ()


def test_agent_total_mismatch_fails():
    verdict = check_comparability([_config("a", counts=(89,)),
                                   _config("b", counts=(90,))])
    assert not verdict.comparable
    assert verdict.criteria["agent_total"] is False
    assert any("agent totals differ" in d for d in verdict.details)


def test_goal_count_mismatch_fails():
    verdict = check_comparability([_config("a"), _config("b", extra_goals=1)])
    assert not verdict.comparable
    assert verdict.criteria["goal_count"] is False


def test_equal_area_different_shape_fails():
    # 30x30 and 60x15 enclose the same area; dimensions must match exactly
    verdict = check_comparability([_config("a", width=30, height=30),
                                   _config("b", width=60, height=15)])
    assert not verdict.comparable
    assert verdict.criteria["surface_area"] is False
    assert any("environment sizes differ" in d for d in verdict.details)


def test_single_configuration_rejected():
    with pytest.raises(ValueError, match="at least two"):
        check_comparability([_config("a")])


def test_verdict_is_order_invariant():
    configs = [_config("a", counts=(10,)), _config("b", counts=(5, 5)),
               _config("c", counts=(9,))]
    verdicts = [check_comparability(list(p))
                for p in itertools.permutations(configs)]
    assert all(v.comparable == verdicts[0].comparable for v in verdicts)
    assert all(v.criteria == verdicts[0].criteria for v in verdicts)


def test_copy_is_independent_of_original():
    box = Obstacle(center=Vec2(15.0, 15.0), size=(2.0, 2.0))
    original = _config("a", obstacles=(box,))
    copy = deep_copy_configuration(original, "a-v2")
    assert copy.id == "a-v2"
    assert copy.obstacles == original.obstacles

    moved = dataclasses.replace(
        copy, obstacles=(Obstacle(center=Vec2(20.0, 10.0), size=(2.0, 2.0)),))
    assert original.obstacles[0].center == Vec2(15.0, 15.0)
    assert moved.obstacles[0].center != original.obstacles[0].center


def test_copy_stays_comparable_until_edited():
    original = _config("a")
    copy = deep_copy_configuration(original, "b")
    assert check_comparability([original, copy]).comparable

    extra = dataclasses.replace(
        copy, spawn_areas=(SpawnArea(rect=Rect(1, 23, 6, 6), agent_count=11,
                                     goal_id="exit"),))
    assert not check_comparability([original, extra]).comparable


def _corner_config():
    # lone spawn cell at (1, 1), goal at (29, 29): straight-line distance
    # is 28 * sqrt(2), give or take the sampling jitter inside the rect
    return Configuration(
        id="corner", environment=Environment(30, 30),
        spawn_areas=[SpawnArea(rect=Rect(0.6, 0.6, 0.8, 0.8), agent_count=1,
                               goal_id="exit")],
        goals=[Goal(id="exit", center=Vec2(29.0, 29.0), radius=0.5)])


def test_reference_distance_matches_geometry():
    spec = select_reference_agent(_corner_config())
    assert spec.distance_to_goal == pytest.approx(28 * math.sqrt(2), abs=0.5)
    d = math.hypot(spec.spawn_position.x - 29.0, spec.spawn_position.y - 29.0)
    assert spec.distance_to_goal == pytest.approx(d, abs=1e-9)


def test_reference_prefers_farther_spawn():
    config = Configuration(
        id="two", environment=Environment(30, 30),
        spawn_areas=[SpawnArea(rect=Rect(24, 24, 3, 3), agent_count=5,
                               goal_id="exit"),
                     SpawnArea(rect=Rect(1, 1, 3, 3), agent_count=5,
                               goal_id="exit")],
        goals=[Goal(id="exit", center=Vec2(29.0, 29.0), radius=0.5)])
    spec = select_reference_agent(config)
    assert spec.spawn_position.x < 5 and spec.spawn_position.y < 5
    assert spec.distance_to_goal > 30


def test_reference_choice_is_deterministic():
    config = _corner_config()
    assert select_reference_agent(config) == select_reference_agent(config)


def test_reference_distance_bounded_by_diagonal(scenario_dir):
    from evacsim import load_scenario

    for name in ("s1", "s2", "s3", "s4", "s5"):
        scenario = load_scenario(scenario_dir / f"{name}.json")
        for config in scenario.configurations:
            spec = select_reference_agent(config)
            assert spec.distance_to_goal <= config.environment.hypotenuse
