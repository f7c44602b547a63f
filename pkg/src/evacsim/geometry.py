"""Planar geometry helpers: points, axis-aligned rects, rotated rects."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Vec2", "Rect", "rotated_rect_corners", "point_rect_distance",
           "point_in_rotated_rect", "dilated_contains", "rects_intersect"]


@dataclass(frozen=True)
class Vec2:
    """A point or displacement in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate ({self.x}, {self.y})")

    def distance_to(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle anchored at its lower-left corner."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for v in (self.x, self.y, self.w, self.h):
            if not math.isfinite(v):
                raise ValueError("non-finite rect field")
        if self.w < 0 or self.h < 0:
            raise ValueError(f"negative rect size {self.w}x{self.h}")

    @property
    def center(self) -> Vec2:
        return Vec2(self.x + self.w / 2.0, self.y + self.h / 2.0)

    def contains(self, p: Vec2) -> bool:
        return self.x <= p.x <= self.x + self.w and self.y <= p.y <= self.y + self.h

    def corners(self) -> list[Vec2]:
        return [Vec2(self.x, self.y), Vec2(self.x + self.w, self.y),
                Vec2(self.x + self.w, self.y + self.h), Vec2(self.x, self.y + self.h)]


def _to_local(px, py, cx: float, cy: float, rotation: float):
    """Rotate world coords into the frame of a box centered at (cx, cy)."""
    c, s = math.cos(rotation), math.sin(rotation)
    dx, dy = px - cx, py - cy
    return c * dx + s * dy, -s * dx + c * dy


def rotated_rect_corners(cx: float, cy: float, w: float, h: float,
                         rotation: float) -> list[Vec2]:
    """World-space corners of a box rotated about its center (radians, CCW)."""
    c, s = math.cos(rotation), math.sin(rotation)
    out = []
    for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        lx, ly = sx * w / 2.0, sy * h / 2.0
        out.append(Vec2(cx + c * lx - s * ly, cy + s * lx + c * ly))
    return out


def point_rect_distance(px, py, cx: float, cy: float, w: float, h: float,
                        rotation: float):
    """Distance from point(s) to a rotated box; zero inside. Vectorized."""
    lx, ly = _to_local(px, py, cx, cy, rotation)
    dx = np.maximum(np.abs(lx) - w / 2.0, 0.0)
    dy = np.maximum(np.abs(ly) - h / 2.0, 0.0)
    return np.hypot(dx, dy)


def point_in_rotated_rect(px, py, cx: float, cy: float, w: float, h: float,
                          rotation: float, strict: bool = True):
    """Point-in-box test in the box's local frame. Vectorized."""
    lx, ly = _to_local(px, py, cx, cy, rotation)
    if strict:
        return (np.abs(lx) < w / 2.0) & (np.abs(ly) < h / 2.0)
    return (np.abs(lx) <= w / 2.0) & (np.abs(ly) <= h / 2.0)


def dilated_contains(px, py, cx: float, cy: float, w: float, h: float,
                     rotation: float, margin: float):
    """True where point(s) lie within ``margin`` of the box (exact disc dilation)."""
    return point_rect_distance(px, py, cx, cy, w, h, rotation) <= margin


def _project(points, ax, ay):
    vals = [p.x * ax + p.y * ay for p in points]
    return min(vals), max(vals)


def rects_intersect(rect: Rect, cx: float, cy: float, w: float, h: float,
                    rotation: float) -> bool:
    """Separating-axis overlap test between an axis rect and a rotated box.

    Boundary contact does not count as intersection, so flush placement
    against a wall segment is allowed.
    """
    a = rect.corners()
    b = rotated_rect_corners(cx, cy, w, h, rotation)
    c, s = math.cos(rotation), math.sin(rotation)
    axes = [(1.0, 0.0), (0.0, 1.0), (c, s), (-s, c)]
    for ax, ay in axes:
        a_min, a_max = _project(a, ax, ay)
        b_min, b_max = _project(b, ax, ay)
        if a_max <= b_min + 1e-12 or b_max <= a_min + 1e-12:
            return False
    return True
