// Editor state and the object/tab actions the toolbar maps to. Pure data in,
// pure data out: every action recomputes the comparability banner so the DOM
// layer only ever renders state, never decides anything.

import {
  blankConfiguration,
  blankScenario,
  canPlaceGoal,
  canPlaceObstacle,
  canPlaceSpawn,
  checkComparability,
  deepCopyConfiguration,
  nextConfigId,
  snap,
  type Comparability,
  type Placement,
} from "./scenario.js";
import type {
  ConfigurationSpec,
  GoalSpec,
  ObstacleSpec,
  ScenarioSpec,
  SpawnAreaSpec,
} from "./types.js";

export const MAX_TABS = 4;

export type ToolMode =
  | "place-spawn"
  | "place-goal"
  | "place-obstacle"
  | "move"
  | "edit"
  | "delete";

export type ObjectKind = "spawn" | "goal" | "obstacle";

export type Selection = { kind: ObjectKind; index: number } | null;

export type EditorState = {
  scenario: ScenarioSpec;
  activeTab: number;
  tool: ToolMode;
  selection: Selection;
  comparability: Comparability;
  feedback: string | null; // inline message from the last rejected action
  lastJobId: string | null;
};

export function newEditorState(scenario?: ScenarioSpec): EditorState {
  const s = scenario ?? blankScenario();
  return {
    scenario: s,
    activeTab: 0,
    tool: "place-spawn",
    selection: null,
    comparability: checkComparability(s.configurations),
    feedback: null,
    lastJobId: null,
  };
}

export function activeConfig(state: EditorState): ConfigurationSpec {
  return state.scenario.configurations[state.activeTab];
}

function refresh(state: EditorState): void {
  state.comparability = checkComparability(state.scenario.configurations);
}

function reject(state: EditorState, verdict: Placement): boolean {
  if (verdict.ok) {
    state.feedback = null;
    return false;
  }
  state.feedback = verdict.reason;
  return true;
}

// ------------------------------------------------------------- tab actions

export function canAddTab(state: EditorState): boolean {
  return state.scenario.configurations.length < MAX_TABS;
}

export function addTab(state: EditorState): boolean {
  if (!canAddTab(state)) {
    state.feedback = `limited to ${MAX_TABS} configurations`;
    return false;
  }
  const config = blankConfiguration(nextConfigId(state.scenario));
  const current = activeConfig(state).environment;
  config.environment = { ...current }; // new tabs inherit the room size
  state.scenario.configurations.push(config);
  state.activeTab = state.scenario.configurations.length - 1;
  state.selection = null;
  refresh(state);
  return true;
}

export function duplicateTab(state: EditorState): boolean {
  if (!canAddTab(state)) {
    state.feedback = `limited to ${MAX_TABS} configurations`;
    return false;
  }
  const copy = deepCopyConfiguration(
    activeConfig(state),
    nextConfigId(state.scenario),
  );
  state.scenario.configurations.push(copy);
  state.activeTab = state.scenario.configurations.length - 1;
  state.selection = null;
  refresh(state);
  return true;
}

export function removeTab(state: EditorState, index: number): boolean {
  const configs = state.scenario.configurations;
  if (configs.length <= 1) {
    state.feedback = "a scenario needs at least one configuration";
    return false;
  }
  if (index < 0 || index >= configs.length) return false;
  configs.splice(index, 1);
  state.activeTab = Math.min(state.activeTab, configs.length - 1);
  state.selection = null;
  refresh(state);
  return true;
}

export function selectTab(state: EditorState, index: number): void {
  if (index >= 0 && index < state.scenario.configurations.length) {
    state.activeTab = index;
    state.selection = null;
  }
}

// ---------------------------------------------------------- object actions

export function placeSpawn(
  state: EditorState,
  x: number,
  y: number,
  w: number,
  h: number,
  agentCount: number,
  goalId?: string,
): boolean {
  const config = activeConfig(state);
  const rect = { x: snap(x), y: snap(y), w: snap(w), h: snap(h) };
  if (reject(state, canPlaceSpawn(rect, config))) return false;
  const goal = goalId ?? config.goals[0]?.id;
  if (!goal) {
    state.feedback = "place a goal first so the crowd has somewhere to walk";
    return false;
  }
  const area: SpawnAreaSpec = { rect, agent_count: agentCount, goal_id: goal };
  config.spawn_areas.push(area);
  state.selection = { kind: "spawn", index: config.spawn_areas.length - 1 };
  refresh(state);
  return true;
}

export function placeGoal(
  state: EditorState,
  x: number,
  y: number,
  radius = 0.5,
): boolean {
  const config = activeConfig(state);
  const taken = new Set(config.goals.map((g) => g.id));
  let id = "exit";
  for (let n = 2; taken.has(id); n += 1) id = `exit${n}`;
  const goal: GoalSpec = { id, center: { x: snap(x), y: snap(y) }, radius };
  if (reject(state, canPlaceGoal(goal, config))) return false;
  config.goals.push(goal);
  state.selection = { kind: "goal", index: config.goals.length - 1 };
  refresh(state);
  return true;
}

export function placeObstacle(
  state: EditorState,
  cx: number,
  cy: number,
  w: number,
  h: number,
  rotation = 0,
): boolean {
  const config = activeConfig(state);
  const ob: ObstacleSpec = {
    center: { x: snap(cx), y: snap(cy) },
    size: { w: snap(w), h: snap(h) },
    rotation,
  };
  if (reject(state, canPlaceObstacle(ob, config))) return false;
  config.obstacles ??= [];
  config.obstacles.push(ob);
  state.selection = { kind: "obstacle", index: config.obstacles.length - 1 };
  refresh(state);
  return true;
}

export function moveObject(
  state: EditorState,
  selection: NonNullable<Selection>,
  dx: number,
  dy: number,
): boolean {
  const config = activeConfig(state);
  if (selection.kind === "spawn") {
    const area = config.spawn_areas[selection.index];
    if (!area) return false;
    const rect = { ...area.rect, x: snap(area.rect.x + dx), y: snap(area.rect.y + dy) };
    if (reject(state, canPlaceSpawn(rect, config))) return false;
    area.rect = rect;
  } else if (selection.kind === "goal") {
    const goal = config.goals[selection.index];
    if (!goal) return false;
    const moved = {
      ...goal,
      center: { x: snap(goal.center.x + dx), y: snap(goal.center.y + dy) },
    };
    if (reject(state, canPlaceGoal(moved, config))) return false;
    goal.center = moved.center;
  } else {
    const ob = (config.obstacles ?? [])[selection.index];
    if (!ob) return false;
    const moved = {
      ...ob,
      center: { x: snap(ob.center.x + dx), y: snap(ob.center.y + dy) },
    };
    if (reject(state, canPlaceObstacle(moved, config))) return false;
    ob.center = moved.center;
  }
  refresh(state);
  return true;
}

export function editAgentCount(
  state: EditorState,
  spawnIndex: number,
  agentCount: number,
): boolean {
  const area = activeConfig(state).spawn_areas[spawnIndex];
  if (!area) return false;
  if (!Number.isInteger(agentCount) || agentCount < 1) {
    state.feedback = "agent count must be a positive integer";
    return false;
  }
  area.agent_count = agentCount;
  state.feedback = null;
  refresh(state);
  return true;
}

export function deleteObject(
  state: EditorState,
  selection: NonNullable<Selection>,
): boolean {
  const config = activeConfig(state);
  const list =
    selection.kind === "spawn" ? config.spawn_areas :
    selection.kind === "goal" ? config.goals :
    config.obstacles ?? [];
  if (selection.index < 0 || selection.index >= list.length) return false;
  if (selection.kind === "goal") {
    const id = config.goals[selection.index].id;
    const used = config.spawn_areas.some((a) => a.goal_id === id);
    if (used) {
      state.feedback = `goal '${id}' is still referenced by a spawn area`;
      return false;
    }
  }
  list.splice(selection.index, 1);
  state.selection = null;
  state.feedback = null;
  refresh(state);
  return true;
}

// --------------------------------------------------------------- the banner

export function bannerText(state: EditorState): string | null {
  if (state.comparability.comparable) return null;
  return `not comparable: ${state.comparability.details.join("; ")}`;
}
