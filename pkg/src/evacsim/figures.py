"""Matplotlib renderings of run artifacts, written next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Rectangle

from .metrics import OccupancyGrid, TrajectorySet
from .scenario import Configuration

__all__ = ["render_occupancy", "render_trajectories"]


def _draw_layout(ax, config: Configuration, spawn: bool = True):
    env = config.environment
    ax.set_xlim(0, env.width)
    ax.set_ylim(0, env.height)
    ax.set_aspect("equal")
    if spawn:
        for area in config.spawn_areas:
            r = area.rect
            ax.add_patch(Rectangle((r.x, r.y), r.w, r.h, fill=False,
                                   edgecolor="tab:blue", linewidth=1.2,
                                   linestyle="--"))
    for goal in config.goals:
        ax.add_patch(Circle((goal.center.x, goal.center.y), goal.radius,
                            fill=False, edgecolor="tab:green", linewidth=1.4))
    for ob in config.obstacles:
        pts = [(c.x, c.y) for c in ob.corners()]
        ax.fill(*zip(*pts), facecolor="0.35", edgecolor="0.2")


def render_occupancy(grid: OccupancyGrid, config: Configuration,
                     path: str | Path) -> None:
    """Heatmap of distinct-agent visits per square meter cell."""
    env = config.environment
    fig, ax = plt.subplots(figsize=(6, 6 * env.height / env.width))
    img = ax.imshow(grid.counts.T, origin="lower", cmap="inferno",
                    extent=(0, grid.counts.shape[0] * grid.cell,
                            0, grid.counts.shape[1] * grid.cell),
                    interpolation="nearest")
    _draw_layout(ax, config, spawn=False)
    fig.colorbar(img, ax=ax, label="agents through cell", shrink=0.85)
    ax.set_title(f"{config.id}: occupancy")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)


def render_trajectories(traj: TrajectorySet, config: Configuration,
                        path: str | Path) -> None:
    """All agent polylines over the layout, goals and obstacles included."""
    env = config.environment
    fig, ax = plt.subplots(figsize=(6, 6 * env.height / env.width))
    for points in traj.paths.values():
        ax.plot(points[:, 0], points[:, 1], color="tab:red", alpha=0.25,
                linewidth=0.7)
    _draw_layout(ax, config)
    ax.set_title(f"{config.id}: trajectories")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
