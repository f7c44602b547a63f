"""Configuration validation: collects violations instead of throwing."""

from __future__ import annotations

from dataclasses import dataclass

from .engine import SimParams
from .geometry import rects_intersect
from .navgrid import build_nav_grid, reachable_cells
from .scenario import Configuration

__all__ = ["ValidationReport", "validate_configuration"]


@dataclass(frozen=True)
class ValidationReport:
    """List of human-readable violations; empty means simulable."""

    configuration_id: str
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_configuration(config: Configuration,
                           params: SimParams | None = None) -> ValidationReport:
    """Check every cross-object invariant of a configuration.

    Reports, never raises: containment of spawn rects, goals and obstacles in
    the environment, goal references, spawn/obstacle overlap, and grid
    reachability from each spawn area center to its goal.
    """
    p = params if params is not None else SimParams()
    env = config.environment
    out: list[str] = []

    if not config.spawn_areas:
        out.append("configuration has no spawn areas")
    if not config.goals:
        out.append("configuration has no goals")

    goal_ids = [g.id for g in config.goals]
    if len(set(goal_ids)) != len(goal_ids):
        out.append(f"duplicate goal ids: {goal_ids}")

    for gi, goal in enumerate(config.goals):
        if not env.contains(goal.center):
            out.append(f"goal '{goal.id}' center ({goal.center.x}, {goal.center.y}) "
                       f"lies outside the environment")

    for oi, ob in enumerate(config.obstacles):
        for corner in ob.corners():
            if not env.contains(corner):
                out.append(f"obstacle {oi} extends outside the environment "
                           f"(corner at ({corner.x:.3f}, {corner.y:.3f}))")
                break

    for ai, area in enumerate(config.spawn_areas):
        rect = area.rect
        inside = (0 <= rect.x and 0 <= rect.y and rect.x + rect.w <= env.width
                  and rect.y + rect.h <= env.height)
        if not inside:
            out.append(f"spawn area {ai} rect is not fully inside the environment")
        if area.goal_id not in goal_ids:
            out.append(f"spawn area {ai} references missing goal '{area.goal_id}'")
        for oi, ob in enumerate(config.obstacles):
            w, h = ob.size
            if rects_intersect(rect, ob.center.x, ob.center.y, w, h, ob.rotation):
                out.append(f"spawn area {ai} intersects obstacle {oi}")

    # reachability on the same grid the engine will walk
    if not out or all("intersects" in v or "missing goal" not in v for v in out):
        grid = build_nav_grid(config, p.nav_cell, p.agent_radius)
        for ai, area in enumerate(config.spawn_areas):
            goal = config.goal_by_id(area.goal_id)
            if goal is None:
                continue
            start = area.rect.center
            mask = reachable_cells(grid, start)
            if not mask.any():
                out.append(f"spawn area {ai} center is on blocked ground")
                continue
            if not mask[grid.cell_of(goal.center)]:
                out.append(f"goal '{goal.id}' unreachable from spawn area {ai}")

    return ValidationReport(config.id, tuple(out))
