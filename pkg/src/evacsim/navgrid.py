"""Coarse navigation grid and grid pathfinding.

The walkable space is discretized into square cells. A cell is blocked when
its center falls inside any obstacle dilated by the agent radius, or outside
the environment proper (the grid may overhang when the size is not a multiple
of the cell). Paths are shortest 8-connected grid walks, post-smoothed with a
line-of-sight pass so agents cut straight across open space.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Vec2, point_rect_distance
from .scenario import Configuration, Environment

__all__ = ["NavGrid", "NoPathError", "build_nav_grid", "plan_path",
           "PathField", "reachable_cells"]

SQRT2 = math.sqrt(2.0)

# neighbor steps: 4 orthogonal then 4 diagonal, fixed order for determinism
_STEPS = ((1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
          (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2))


class NoPathError(Exception):
    """Raised when no traversable route exists between two points."""


@dataclass(frozen=True)
class NavGrid:
    """Blocked-cell raster over an environment.

    ``blocked[ix, iy]`` covers the square [ix*cell, (ix+1)*cell) x
    [iy*cell, (iy+1)*cell) in world coordinates.
    """

    environment: Environment
    cell: float
    blocked: np.ndarray  # bool, shape (nx, ny)

    @property
    def nx(self) -> int:
        return self.blocked.shape[0]

    @property
    def ny(self) -> int:
        return self.blocked.shape[1]

    def cell_of(self, p: Vec2) -> tuple[int, int]:
        ix = min(int(p.x / self.cell), self.nx - 1)
        iy = min(int(p.y / self.cell), self.ny - 1)
        return max(ix, 0), max(iy, 0)

    def center_of(self, ix: int, iy: int) -> Vec2:
        return Vec2((ix + 0.5) * self.cell, (iy + 0.5) * self.cell)

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.nx and 0 <= iy < self.ny

    def is_free(self, ix: int, iy: int) -> bool:
        return self.in_bounds(ix, iy) and not self.blocked[ix, iy]

    def blocked_centers(self) -> np.ndarray:
        """World coordinates of all blocked cell centers, shape (m, 2)."""
        ix, iy = np.nonzero(self.blocked)
        return np.column_stack(((ix + 0.5) * self.cell, (iy + 0.5) * self.cell))


def build_nav_grid(config: Configuration, cell: float, agent_radius: float) -> NavGrid:
    """Rasterize a configuration's obstacles onto a blocked-cell grid."""
    if cell <= 0:
        raise ValueError(f"cell size must be positive, got {cell}")
    env = config.environment
    nx = math.ceil(env.width / cell)
    ny = math.ceil(env.height / cell)
    cx = (np.arange(nx) + 0.5) * cell
    cy = (np.arange(ny) + 0.5) * cell
    px, py = np.meshgrid(cx, cy, indexing="ij")

    # overhang cells whose centers fall outside the environment are walls
    blocked = (px > env.width) | (py > env.height)
    for ob in config.obstacles:
        w, h = ob.size
        dist = point_rect_distance(px, py, ob.center.x, ob.center.y, w, h, ob.rotation)
        blocked |= dist <= agent_radius
    return NavGrid(env, cell, blocked)


def _neighbors(grid: NavGrid, ix: int, iy: int):
    """Free neighbors with step costs; diagonals must not cut blocked corners."""
    for dx, dy, cost in _STEPS:
        jx, jy = ix + dx, iy + dy
        if not grid.is_free(jx, jy):
            continue
        if dx != 0 and dy != 0:
            if not (grid.is_free(ix + dx, iy) and grid.is_free(ix, iy + dy)):
                continue
        yield jx, jy, cost


def segment_clear(grid: NavGrid, a: Vec2, b: Vec2) -> bool:
    """True when the straight segment a-b stays on free cells throughout."""
    length = a.distance_to(b)
    n = max(int(length / (grid.cell * 0.25)), 1)
    ts = np.linspace(0.0, 1.0, n + 1)
    xs = a.x + (b.x - a.x) * ts
    ys = a.y + (b.y - a.y) * ts
    ix = np.clip((xs / grid.cell).astype(int), 0, grid.nx - 1)
    iy = np.clip((ys / grid.cell).astype(int), 0, grid.ny - 1)
    return not grid.blocked[ix, iy].any()


def _smooth(grid: NavGrid, points: list[Vec2]) -> list[Vec2]:
    """Greedy line-of-sight shortcutting; keeps first and last points."""
    if len(points) <= 2:
        return points
    out = [points[0]]
    i = 0
    while i < len(points) - 1:
        j = i + 1
        # direct jump to the end is the common open-space case
        if segment_clear(grid, points[i], points[-1]):
            out.append(points[-1])
            break
        while j + 1 < len(points) and segment_clear(grid, points[i], points[j + 1]):
            j += 1
        out.append(points[j])
        i = j
    return out


def plan_path(grid: NavGrid, start: Vec2, goal: Vec2, smooth: bool = True) -> list[Vec2]:
    """Shortest grid route from ``start`` to ``goal`` as world waypoints.

    The returned list starts at ``start`` and ends exactly at ``goal``.
    Raises NoPathError when either endpoint maps to a blocked cell or the
    cells are disconnected.
    """
    s = grid.cell_of(start)
    g = grid.cell_of(goal)
    if not grid.is_free(*s) or not grid.is_free(*g):
        raise NoPathError("no path: endpoint cell is blocked")

    # A* with octile heuristic; counter breaks heap ties deterministically
    def heur(ix, iy):
        dx, dy = abs(ix - g[0]), abs(iy - g[1])
        return (max(dx, dy) - min(dx, dy)) + SQRT2 * min(dx, dy)

    dist = {s: 0.0}
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    counter = 0
    frontier = [(heur(*s), counter, s)]
    seen = set()
    while frontier:
        _, _, cur = heapq.heappop(frontier)
        if cur == g:
            break
        if cur in seen:
            continue
        seen.add(cur)
        for jx, jy, cost in _neighbors(grid, *cur):
            nd = dist[cur] + cost
            key = (jx, jy)
            if nd < dist.get(key, math.inf) - 1e-12:
                dist[key] = nd
                parent[key] = cur
                counter += 1
                heapq.heappush(frontier, (nd + heur(jx, jy), counter, key))
    if g not in dist:
        raise NoPathError("no path: goal unreachable from start")

    cells = [g]
    while cells[-1] != s:
        cells.append(parent[cells[-1]])
    cells.reverse()

    points = [start] + [grid.center_of(*c) for c in cells[1:-1]] + [goal]
    if len(cells) == 1:
        points = [start, goal]
    return _smooth(grid, points) if smooth else points


def grid_path_length(points: list[Vec2]) -> float:
    return sum(points[i].distance_to(points[i + 1]) for i in range(len(points) - 1))


class PathField:
    """Cost-to-goal field flooded from one goal cell (Dijkstra, 8-connected).

    Lets every agent read off its route without a separate search: follow
    ``next_hop`` until the goal cell. Costs use the same corner rule as
    ``plan_path`` so extracted routes match A* costs.
    """

    def __init__(self, grid: NavGrid, goal: Vec2):
        self.grid = grid
        self.goal_point = goal
        self.goal_cell = grid.cell_of(goal)
        if not grid.is_free(*self.goal_cell):
            raise NoPathError("no path: goal cell is blocked")
        nx, ny = grid.nx, grid.ny
        self.cost = np.full((nx, ny), np.inf)
        self.next_ix = np.full((nx, ny), -1, dtype=np.int32)
        self.next_iy = np.full((nx, ny), -1, dtype=np.int32)
        gx, gy = self.goal_cell
        self.cost[gx, gy] = 0.0
        counter = 0
        frontier = [(0.0, counter, gx, gy)]
        done = np.zeros((nx, ny), dtype=bool)
        while frontier:
            c, _, ix, iy = heapq.heappop(frontier)
            if done[ix, iy]:
                continue
            done[ix, iy] = True
            for jx, jy, step in _neighbors(grid, ix, iy):
                nd = c + step
                if nd < self.cost[jx, jy] - 1e-12:
                    self.cost[jx, jy] = nd
                    self.next_ix[jx, jy] = ix
                    self.next_iy[jx, jy] = iy
                    counter += 1
                    heapq.heappush(frontier, (nd, counter, jx, jy))

    def route_from(self, start: Vec2, smooth: bool = True) -> list[Vec2]:
        """Waypoints from ``start`` to the goal point, or NoPathError."""
        grid = self.grid
        cell = grid.cell_of(start)
        if not grid.is_free(*cell):
            cell = self._nearest_free(cell)
        if not np.isfinite(self.cost[cell]):
            raise NoPathError("no path: start disconnected from goal")
        cells = [cell]
        while cells[-1] != self.goal_cell:
            ix, iy = cells[-1]
            cells.append((int(self.next_ix[ix, iy]), int(self.next_iy[ix, iy])))
        points = [start] + [grid.center_of(*c) for c in cells[1:-1]] + [self.goal_point]
        if len(cells) == 1:
            points = [start, self.goal_point]
        return _smooth(grid, points) if smooth else points

    def _nearest_free(self, cell: tuple[int, int]) -> tuple[int, int]:
        # spawn points sit between cells occasionally; scan outward rings
        ix0, iy0 = cell
        for r in range(1, 4):
            for iy in range(iy0 - r, iy0 + r + 1):
                for ix in range(ix0 - r, ix0 + r + 1):
                    if max(abs(ix - ix0), abs(iy - iy0)) == r and self.grid.is_free(ix, iy):
                        return ix, iy
        raise NoPathError("no path: start cell is blocked")


def reachable_cells(grid: NavGrid, start: Vec2) -> np.ndarray:
    """Boolean mask of cells connected to ``start`` (8-connected flood fill)."""
    mask = np.zeros_like(grid.blocked)
    s = grid.cell_of(start)
    if not grid.is_free(*s):
        return mask
    stack = [s]
    mask[s] = True
    while stack:
        ix, iy = stack.pop()
        for jx, jy, _ in _neighbors(grid, ix, iy):
            if not mask[jx, jy]:
                mask[jx, jy] = True
                stack.append((jx, jy))
    return mask
