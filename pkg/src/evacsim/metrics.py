"""Run metrics extracted from a simulation trace.

Five summary numbers describe one run:

- t_g: total evacuation time, the finish time of the last agent
- t_bar: mean time to goal over agents
- d_bar: mean crowd density, averaged per frame over occupied 1 m cells
- s_bar: mean of each agent's mean per-frame speed
- w_bar: mean distance walked
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import SimulationTrace
from .scenario import Environment, Goal

__all__ = ["MetricsError", "MetricsBundle", "OccupancyGrid", "TrajectorySet",
           "total_time", "average_time", "average_density", "average_speed",
           "average_distance", "occupancy_map", "trajectories", "compute_metrics"]

DENSITY_CELL = 1.0  # m, density and occupancy both count 1 x 1 m cells


class MetricsError(Exception):
    pass


@dataclass(frozen=True)
class MetricsBundle:
    t_g: float
    t_bar: float
    d_bar: float
    s_bar: float
    w_bar: float
    agents: int

    def __post_init__(self):
        for name in ("t_g", "t_bar", "d_bar", "s_bar", "w_bar"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be finite and positive, got {v}")
        if self.t_bar > self.t_g + 1e-9:
            raise ValueError(f"t_bar {self.t_bar} exceeds t_g {self.t_g}")
        if self.d_bar < 1.0 - 1e-9:
            raise ValueError(f"d_bar {self.d_bar} below 1")


@dataclass(frozen=True)
class OccupancyGrid:
    """How many distinct agents ever entered each 1 x 1 m cell."""

    cell: float
    counts: np.ndarray  # int, shape (ceil(width), ceil(height))


@dataclass(frozen=True)
class TrajectorySet:
    """Per-agent polylines plus the goal discs they walked toward."""

    paths: dict[int, np.ndarray]  # agent id -> (frames, 2)
    goals: tuple[Goal, ...]


def _require_completed(trace: SimulationTrace):
    if not trace.completed:
        raise MetricsError("evacuation did not complete within the time limit")
    if not trace.per_agent:
        raise MetricsError("trace has no finished agents")


def total_time(trace: SimulationTrace) -> float:
    """Finish time of the slowest agent."""
    _require_completed(trace)
    return max(s.t_k for s in trace.per_agent.values())


def average_time(trace: SimulationTrace) -> float:
    _require_completed(trace)
    return sum(s.t_k for s in trace.per_agent.values()) / len(trace.per_agent)


def average_speed(trace: SimulationTrace) -> float:
    _require_completed(trace)
    return sum(s.s_k for s in trace.per_agent.values()) / len(trace.per_agent)


def average_distance(trace: SimulationTrace) -> float:
    _require_completed(trace)
    return sum(s.w_k for s in trace.per_agent.values()) / len(trace.per_agent)


def average_density(trace: SimulationTrace) -> float:
    """Mean over frames of (active agents) / (occupied 1 m cells).

    Every occupied cell holds at least one agent, so each frame contributes
    at least 1.0; an empty run is an error rather than a zero.
    """
    ratios = []
    for fr in trace.frames:
        n = len(fr.ids)
        if n == 0:
            continue
        cells = np.floor(fr.positions / DENSITY_CELL).astype(np.int64)
        occupied = len(np.unique(cells, axis=0))
        ratios.append(n / occupied)
    if not ratios:
        raise MetricsError("trace has no frames with active agents")
    return float(np.mean(ratios))


def occupancy_map(trace: SimulationTrace, environment: Environment) -> OccupancyGrid:
    """Count distinct agents per cell over the whole run."""
    nx = math.ceil(environment.width / DENSITY_CELL)
    ny = math.ceil(environment.height / DENSITY_CELL)
    rows = []
    for fr in trace.frames:
        if len(fr.ids) == 0:
            continue
        cx = np.clip((fr.positions[:, 0] / DENSITY_CELL).astype(np.int64), 0, nx - 1)
        cy = np.clip((fr.positions[:, 1] / DENSITY_CELL).astype(np.int64), 0, ny - 1)
        rows.append(np.column_stack((fr.ids, cx, cy)))
    counts = np.zeros((nx, ny), dtype=np.int64)
    if rows:
        visits = np.unique(np.concatenate(rows), axis=0)  # (agent, cx, cy) once
        np.add.at(counts, (visits[:, 1], visits[:, 2]), 1)
    return OccupancyGrid(DENSITY_CELL, counts)


def trajectories(trace: SimulationTrace) -> TrajectorySet:
    """Stitch each agent's recorded positions into a polyline."""
    buckets: dict[int, list[np.ndarray]] = {}
    for fr in trace.frames:
        for k, aid in enumerate(fr.ids):
            buckets.setdefault(int(aid), []).append(fr.positions[k])
    paths = {aid: np.vstack(points) for aid, points in buckets.items()}
    return TrajectorySet(paths, trace.goals)


def compute_metrics(trace: SimulationTrace) -> MetricsBundle:
    """All five run metrics in one bundle; requires a completed run."""
    return MetricsBundle(
        t_g=total_time(trace),
        t_bar=average_time(trace),
        d_bar=average_density(trace),
        s_bar=average_speed(trace),
        w_bar=average_distance(trace),
        agents=trace.agent_count,
    )
