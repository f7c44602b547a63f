// Scenario building blocks: blank configs, deep copies, grid snapping,
// local validation, and the client-side comparability verdict. The verdict
// must match the server's: equal agent totals, equal goal counts, identical
// environment width and height.

import type {
  ConfigurationSpec,
  GoalSpec,
  ObstacleSpec,
  RectSpec,
  ScenarioSpec,
} from "./types.js";

export const GRID_STEP = 0.5; // m, matches the engine's navigation cell

export function snap(v: number): number {
  return Math.round(v / GRID_STEP) * GRID_STEP;
}

export function blankConfiguration(
  id: string,
  width = 30,
  height = 30,
): ConfigurationSpec {
  return {
    id,
    environment: { width, height },
    spawn_areas: [],
    goals: [],
    obstacles: [],
  };
}

export function blankScenario(name = "untitled"): ScenarioSpec {
  return { name, configurations: [blankConfiguration("c1")] };
}

export function deepCopyConfiguration(
  config: ConfigurationSpec,
  newId: string,
): ConfigurationSpec {
  const copy = structuredClone(config);
  copy.id = newId;
  return copy;
}

export function nextConfigId(scenario: ScenarioSpec): string {
  const taken = new Set(scenario.configurations.map((c) => c.id));
  for (let n = 1; ; n += 1) {
    const id = `c${n}`;
    if (!taken.has(id)) return id;
  }
}

export function totalAgents(config: ConfigurationSpec): number {
  return config.spawn_areas.reduce((sum, area) => sum + area.agent_count, 0);
}

// ---------------------------------------------------------------- geometry

export function rectInBounds(rect: RectSpec, config: ConfigurationSpec): boolean {
  const { width, height } = config.environment;
  return (
    rect.x >= 0 && rect.y >= 0 &&
    rect.x + rect.w <= width && rect.y + rect.h <= height
  );
}

export function rectsOverlap(a: RectSpec, b: RectSpec): boolean {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

export function obstacleBounds(ob: ObstacleSpec): RectSpec {
  // axis-aligned bounding box; rotated boxes get a conservative extent
  const rot = ob.rotation ?? 0;
  const c = Math.abs(Math.cos(rot));
  const s = Math.abs(Math.sin(rot));
  const w = ob.size.w * c + ob.size.h * s;
  const h = ob.size.w * s + ob.size.h * c;
  return { x: ob.center.x - w / 2, y: ob.center.y - h / 2, w, h };
}

// -------------------------------------------------------------- validation

export type Placement = { ok: true } | { ok: false; reason: string };

export function canPlaceSpawn(rect: RectSpec, config: ConfigurationSpec): Placement {
  if (rect.w <= 0 || rect.h <= 0) {
    return { ok: false, reason: "spawn area needs positive width and height" };
  }
  if (!rectInBounds(rect, config)) {
    return { ok: false, reason: "spawn area leaves the environment" };
  }
  for (const ob of config.obstacles ?? []) {
    if (rectsOverlap(rect, obstacleBounds(ob))) {
      return { ok: false, reason: "spawn area overlaps an obstacle" };
    }
  }
  return { ok: true };
}

export function canPlaceObstacle(ob: ObstacleSpec, config: ConfigurationSpec): Placement {
  if (ob.size.w <= 0 || ob.size.h <= 0) {
    return { ok: false, reason: "obstacle needs positive width and height" };
  }
  const box = obstacleBounds(ob);
  if (!rectInBounds(box, config)) {
    return { ok: false, reason: "obstacle leaves the environment" };
  }
  for (const area of config.spawn_areas) {
    if (rectsOverlap(box, area.rect)) {
      return { ok: false, reason: "obstacle overlaps a spawn area" };
    }
  }
  return { ok: true };
}

export function canPlaceGoal(goal: GoalSpec, config: ConfigurationSpec): Placement {
  if (goal.radius <= 0) {
    return { ok: false, reason: "goal needs a positive radius" };
  }
  const { width, height } = config.environment;
  const { x, y } = goal.center;
  if (x < 0 || y < 0 || x > width || y > height) {
    return { ok: false, reason: "goal center leaves the environment" };
  }
  return { ok: true };
}

export function validateConfiguration(config: ConfigurationSpec): string[] {
  const problems: string[] = [];
  if (config.goals.length === 0) {
    problems.push(`${config.id}: needs at least one goal`);
  }
  if (config.spawn_areas.length === 0) {
    problems.push(`${config.id}: needs at least one spawn area`);
  }
  const goalIds = new Set(config.goals.map((g) => g.id));
  for (const area of config.spawn_areas) {
    if (!goalIds.has(area.goal_id)) {
      problems.push(`${config.id}: spawn area references missing goal '${area.goal_id}'`);
    }
    if (area.agent_count < 1) {
      problems.push(`${config.id}: spawn area has no agents`);
    }
    const verdict = canPlaceSpawn(area.rect, config);
    if (!verdict.ok) problems.push(`${config.id}: ${verdict.reason}`);
  }
  for (const ob of config.obstacles ?? []) {
    const verdict = canPlaceObstacle(ob, config);
    if (!verdict.ok) problems.push(`${config.id}: ${verdict.reason}`);
  }
  return problems;
}

export function validateScenario(scenario: ScenarioSpec): string[] {
  const problems = scenario.configurations.flatMap(validateConfiguration);
  const ids = scenario.configurations.map((c) => c.id);
  if (new Set(ids).size !== ids.length) {
    problems.push("configuration ids must be unique");
  }
  return problems;
}

// ----------------------------------------------------------- comparability

export type Comparability = {
  comparable: boolean;
  criteria: { agent_total: boolean; goal_count: boolean; surface_area: boolean };
  details: string[];
};

export function checkComparability(configs: ConfigurationSpec[]): Comparability {
  const criteria = { agent_total: true, goal_count: true, surface_area: true };
  const details: string[] = [];
  if (configs.length < 2) {
    return {
      comparable: false,
      criteria,
      details: ["add a second configuration to compare"],
    };
  }
  const first = configs[0];
  for (const other of configs.slice(1)) {
    if (totalAgents(other) !== totalAgents(first)) {
      criteria.agent_total = false;
      details.push(
        `agent totals differ: ${first.id}=${totalAgents(first)}, ` +
        `${other.id}=${totalAgents(other)}`,
      );
    }
    if (other.goals.length !== first.goals.length) {
      criteria.goal_count = false;
      details.push(
        `goal counts differ: ${first.id}=${first.goals.length}, ` +
        `${other.id}=${other.goals.length}`,
      );
    }
    const a = first.environment;
    const b = other.environment;
    if (a.width !== b.width || a.height !== b.height) {
      criteria.surface_area = false;
      details.push(
        `environment sizes differ: ${first.id}=${a.width}x${a.height}, ` +
        `${other.id}=${b.width}x${b.height}`,
      );
    }
  }
  const comparable =
    criteria.agent_total && criteria.goal_count && criteria.surface_area;
  return { comparable, criteria, details };
}

// ------------------------------------------------------------------- file

export function serializeScenario(scenario: ScenarioSpec): string {
  return JSON.stringify(scenario, null, 2) + "\n";
}

export function parseScenario(text: string): ScenarioSpec {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new Error(`not valid JSON: ${(err as Error).message}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("scenario must be a JSON object");
  }
  const obj = doc as Record<string, unknown>;
  if (!Array.isArray(obj.configurations) || obj.configurations.length === 0) {
    throw new Error("scenario needs a configurations array");
  }
  const scenario: ScenarioSpec = {
    name: typeof obj.name === "string" ? obj.name : "untitled",
    configurations: obj.configurations as ScenarioSpec["configurations"],
  };
  for (const config of scenario.configurations) {
    if (typeof config.id !== "string" || !config.id) {
      throw new Error("every configuration needs a string id");
    }
    if (
      typeof config.environment?.width !== "number" ||
      typeof config.environment?.height !== "number"
    ) {
      throw new Error(`configuration '${config.id}' has no environment size`);
    }
    config.spawn_areas ??= [];
    config.goals ??= [];
    config.obstacles ??= [];
  }
  return scenario;
}
