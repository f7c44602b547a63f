// Canvas rendering: meter-scaled floor plan with a 0.5 m grid, the three
// object kinds, and the two result overlays (occupancy heatmap, walked
// trajectories). Pure draw calls; no state lives here.

import type { ConfigurationSpec } from "./types.js";
import type { Graymap } from "./pgm.js";
import { GRID_STEP, obstacleBounds } from "./scenario.js";
import type { Selection } from "./editor.js";

export type ViewTransform = {
  scale: number; // px per meter
  height: number; // environment height, m (for y-flip)
};

export function fitTransform(
  config: ConfigurationSpec,
  canvasWidth: number,
  canvasHeight: number,
): ViewTransform {
  const { width, height } = config.environment;
  const scale = Math.min(canvasWidth / width, canvasHeight / height);
  return { scale, height };
}

// scenario coordinates have y up; the canvas has y down
export function toPx(view: ViewTransform, x: number, y: number): [number, number] {
  return [x * view.scale, (view.height - y) * view.scale];
}

export function toMeters(view: ViewTransform, px: number, py: number): [number, number] {
  return [px / view.scale, view.height - py / view.scale];
}

export function heatColor(value: number, max: number): string {
  // white through amber to deep red, normalized per configuration's max
  if (max <= 0 || value <= 0) return "rgba(255,255,255,0)";
  const t = Math.min(value / max, 1);
  const r = 255;
  const g = Math.round(235 * (1 - t * 0.85));
  const b = Math.round(205 * (1 - t));
  return `rgba(${r},${g},${b},${0.35 + 0.55 * t})`;
}

export function drawGrid(
  ctx: CanvasRenderingContext2D,
  config: ConfigurationSpec,
  view: ViewTransform,
): void {
  const { width, height } = config.environment;
  ctx.save();
  ctx.fillStyle = "#fcfcfa";
  const [x0, y0] = toPx(view, 0, height);
  ctx.fillRect(x0, y0, width * view.scale, height * view.scale);
  ctx.strokeStyle = "#e4e4e0";
  ctx.lineWidth = 1;
  for (let x = 0; x <= width + 1e-9; x += GRID_STEP) {
    const major = Math.abs(x - Math.round(x)) < 1e-9;
    ctx.strokeStyle = major ? "#d8d8d2" : "#efefe9";
    ctx.beginPath();
    const [px] = toPx(view, x, 0);
    ctx.moveTo(px, y0);
    ctx.lineTo(px, y0 + height * view.scale);
    ctx.stroke();
  }
  for (let y = 0; y <= height + 1e-9; y += GRID_STEP) {
    const major = Math.abs(y - Math.round(y)) < 1e-9;
    ctx.strokeStyle = major ? "#d8d8d2" : "#efefe9";
    ctx.beginPath();
    const [, py] = toPx(view, 0, y);
    ctx.moveTo(x0, py);
    ctx.lineTo(x0 + width * view.scale, py);
    ctx.stroke();
  }
  ctx.strokeStyle = "#555";
  ctx.lineWidth = 2;
  ctx.strokeRect(x0, y0, width * view.scale, height * view.scale);
  ctx.restore();
}

export function drawConfiguration(
  ctx: CanvasRenderingContext2D,
  config: ConfigurationSpec,
  view: ViewTransform,
  selection: Selection,
): void {
  ctx.save();
  config.spawn_areas.forEach((area, i) => {
    const picked = selection?.kind === "spawn" && selection.index === i;
    const [px, py] = toPx(view, area.rect.x, area.rect.y + area.rect.h);
    ctx.fillStyle = picked ? "rgba(46,125,50,0.35)" : "rgba(46,125,50,0.2)";
    ctx.strokeStyle = "#2e7d32";
    ctx.lineWidth = picked ? 2.5 : 1.5;
    ctx.fillRect(px, py, area.rect.w * view.scale, area.rect.h * view.scale);
    ctx.strokeRect(px, py, area.rect.w * view.scale, area.rect.h * view.scale);
    ctx.fillStyle = "#1b5e20";
    ctx.font = "12px sans-serif";
    ctx.fillText(`${area.agent_count} agents`, px + 4, py + 14);
  });
  (config.obstacles ?? []).forEach((ob, i) => {
    const picked = selection?.kind === "obstacle" && selection.index === i;
    const [cx, cy] = toPx(view, ob.center.x, ob.center.y);
    ctx.save();
    ctx.translate(cx, cy);
    ctx.rotate(-(ob.rotation ?? 0)); // canvas y is flipped, so rotation is too
    ctx.fillStyle = picked ? "rgba(69,90,100,0.8)" : "rgba(69,90,100,0.6)";
    const w = ob.size.w * view.scale;
    const h = ob.size.h * view.scale;
    ctx.fillRect(-w / 2, -h / 2, w, h);
    ctx.restore();
  });
  config.goals.forEach((goal, i) => {
    const picked = selection?.kind === "goal" && selection.index === i;
    const [cx, cy] = toPx(view, goal.center.x, goal.center.y);
    ctx.beginPath();
    ctx.arc(cx, cy, goal.radius * view.scale, 0, Math.PI * 2);
    ctx.fillStyle = picked ? "rgba(198,40,40,0.5)" : "rgba(198,40,40,0.35)";
    ctx.strokeStyle = "#c62828";
    ctx.lineWidth = picked ? 2.5 : 1.5;
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#b71c1c";
    ctx.font = "12px sans-serif";
    ctx.fillText(goal.id, cx + goal.radius * view.scale + 3, cy + 4);
  });
  ctx.restore();
}

export function drawOccupancy(
  ctx: CanvasRenderingContext2D,
  map: Graymap,
  view: ViewTransform,
): void {
  // one graymap pixel per 1 x 1 m cell, top row first; ramp scales to the
  // configuration's own peak so each heatmap uses its full range
  let max = 0;
  for (const v of map.pixels) max = Math.max(max, v);
  ctx.save();
  for (let row = 0; row < map.height; row += 1) {
    for (let col = 0; col < map.width; col += 1) {
      const v = map.pixels[row * map.width + col];
      if (v === 0) continue;
      const yTop = view.height - row; // meters, top edge of this cell
      const [px, py] = toPx(view, col, yTop);
      ctx.fillStyle = heatColor(v, max);
      ctx.fillRect(px, py, view.scale, view.scale);
    }
  }
  ctx.restore();
}

export function drawTrajectories(
  ctx: CanvasRenderingContext2D,
  paths: Map<number, Array<[number, number]>>,
  view: ViewTransform,
): void {
  ctx.save();
  ctx.lineWidth = 1;
  for (const [id, path] of paths) {
    if (path.length < 2) continue;
    ctx.strokeStyle = `hsla(${(id * 47) % 360}, 60%, 45%, 0.5)`;
    ctx.beginPath();
    const [x0, y0] = toPx(view, path[0][0], path[0][1]);
    ctx.moveTo(x0, y0);
    for (let i = 1; i < path.length; i += 1) {
      const [x, y] = toPx(view, path[i][0], path[i][1]);
      ctx.lineTo(x, y);
    }
    ctx.stroke();
  }
  ctx.restore();
}

export function hitTest(
  config: ConfigurationSpec,
  x: number,
  y: number,
): Selection {
  // goals first (small, drawn on top), then obstacles, then spawn areas
  for (let i = config.goals.length - 1; i >= 0; i -= 1) {
    const g = config.goals[i];
    const r = Math.max(g.radius, 0.4); // small goals stay clickable
    if (Math.hypot(x - g.center.x, y - g.center.y) <= r) {
      return { kind: "goal", index: i };
    }
  }
  const obstacles = config.obstacles ?? [];
  for (let i = obstacles.length - 1; i >= 0; i -= 1) {
    const box = obstacleBounds(obstacles[i]);
    if (x >= box.x && x <= box.x + box.w && y >= box.y && y <= box.y + box.h) {
      return { kind: "obstacle", index: i };
    }
  }
  for (let i = config.spawn_areas.length - 1; i >= 0; i -= 1) {
    const r = config.spawn_areas[i].rect;
    if (x >= r.x && x <= r.x + r.w && y >= r.y && y <= r.y + r.h) {
      return { kind: "spawn", index: i };
    }
  }
  return null;
}
