"""Scenario model: environments, spawn areas, goals, obstacles, configurations.

All types are immutable value objects. Geometric coordinates are meters with
the origin at the environment's lower-left corner.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field, replace

from .geometry import Rect, Vec2, rotated_rect_corners

__all__ = [
    "Environment", "SpawnArea", "Goal", "Obstacle", "Configuration", "Scenario",
    "ComparabilityResult", "ReferenceAgentSpec",
    "check_comparability", "deep_copy_configuration",
]


@dataclass(frozen=True)
class Environment:
    """Rectangular walkable world, width x height meters."""

    width: float
    height: float

    def __post_init__(self):
        if not (math.isfinite(self.width) and math.isfinite(self.height)):
            raise ValueError("non-finite environment size")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"environment size must be positive, got "
                             f"{self.width}x{self.height}")

    @property
    def hypotenuse(self) -> float:
        """Length of the environment diagonal, used as the distance scale."""
        return math.hypot(self.width, self.height)

    def contains(self, p: Vec2) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height


@dataclass(frozen=True)
class SpawnArea:
    """Rectangular region that emits ``agent_count`` agents toward one goal."""

    rect: Rect
    agent_count: int
    goal_id: str

    def __post_init__(self):
        if not isinstance(self.agent_count, int) or isinstance(self.agent_count, bool):
            raise ValueError("agent_count must be an integer")
        if self.agent_count < 1:
            raise ValueError(f"agent_count must be >= 1, got {self.agent_count}")


@dataclass(frozen=True)
class Goal:
    """Circular arrival region; agents finish on entering the disc."""

    id: str
    center: Vec2
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise ValueError(f"goal radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Obstacle:
    """Impassable box, rotated by ``rotation`` radians about its center."""

    center: Vec2
    size: tuple[float, float]
    rotation: float = 0.0

    def __post_init__(self):
        w, h = self.size
        if not (math.isfinite(w) and math.isfinite(h)) or w <= 0 or h <= 0:
            raise ValueError(f"obstacle size must be positive, got {w}x{h}")
        if not math.isfinite(self.rotation):
            raise ValueError("non-finite obstacle rotation")

    def corners(self) -> list[Vec2]:
        w, h = self.size
        return rotated_rect_corners(self.center.x, self.center.y, w, h, self.rotation)


@dataclass(frozen=True)
class Configuration:
    """One candidate layout: environment plus spawn areas, goals, obstacles."""

    id: str
    environment: Environment
    spawn_areas: tuple[SpawnArea, ...]
    goals: tuple[Goal, ...]
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        # tolerate plain lists from callers; store immutable tuples
        object.__setattr__(self, "spawn_areas", tuple(self.spawn_areas))
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if not self.id:
            raise ValueError("configuration id must be non-empty")

    @property
    def total_agents(self) -> int:
        return sum(a.agent_count for a in self.spawn_areas)

    def goal_by_id(self, goal_id: str) -> Goal | None:
        for g in self.goals:
            if g.id == goal_id:
                return g
        return None


@dataclass(frozen=True)
class Scenario:
    """Named set of configurations meant to be ranked against each other."""

    name: str
    configurations: tuple[Configuration, ...]

    def __post_init__(self):
        object.__setattr__(self, "configurations", tuple(self.configurations))
        ids = [c.id for c in self.configurations]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate configuration ids: {ids}")


@dataclass(frozen=True)
class ComparabilityResult:
    """Verdict plus per-criterion detail for a set of configurations."""

    comparable: bool
    criteria: dict[str, bool]
    details: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReferenceAgentSpec:
    """The single agent whose solo run normalizes a configuration's metrics."""

    configuration_id: str
    spawn_position: Vec2
    goal_id: str
    distance_to_goal: float


def check_comparability(configurations) -> ComparabilityResult:
    """Decide whether configurations may be scored against each other.

    Three criteria, all required: equal total agent count, equal goal count,
    and identical environment width and height (same area with different
    proportions is not enough). Spawn and obstacle layouts may differ freely.
    """
    configs = list(configurations)
    if len(configs) < 2:
        raise ValueError("nothing to compare: need at least two configurations")

    first = configs[0]
    criteria = {"agent_total": True, "goal_count": True, "surface_area": True}
    details: list[str] = []
    for other in configs[1:]:
        if other.total_agents != first.total_agents:
            criteria["agent_total"] = False
            details.append(
                f"agent totals differ: {first.id}={first.total_agents}, "
                f"{other.id}={other.total_agents}")
        if len(other.goals) != len(first.goals):
            criteria["goal_count"] = False
            details.append(
                f"goal counts differ: {first.id}={len(first.goals)}, "
                f"{other.id}={len(other.goals)}")
        env_a, env_b = first.environment, other.environment
        if env_a.width != env_b.width or env_a.height != env_b.height:
            criteria["surface_area"] = False
            details.append(
                f"environment sizes differ: {first.id}={env_a.width}x{env_a.height}, "
                f"{other.id}={env_b.width}x{env_b.height}")
    return ComparabilityResult(all(criteria.values()), criteria, tuple(details))


def deep_copy_configuration(config: Configuration, new_id: str) -> Configuration:
    """Fully independent copy under a new id; editing it never touches the original."""
    if not new_id:
        raise ValueError("new configuration id must be non-empty")
    return replace(copy.deepcopy(config), id=new_id)
