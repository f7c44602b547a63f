import { expect, test } from "vitest";

import {
  activeConfig,
  addTab,
  bannerText,
  canAddTab,
  deleteObject,
  duplicateTab,
  editAgentCount,
  moveObject,
  newEditorState,
  placeGoal,
  placeObstacle,
  placeSpawn,
  removeTab,
  selectTab,
  MAX_TABS,
} from "../src/editor.js";

function authored() {
  const state = newEditorState();
  placeGoal(state, 28, 2);
  placeSpawn(state, 1, 23, 6, 6, 30);
  return state;
}

test("fresh editor starts non-comparable with one tab", () => {
  const state = newEditorState();
  expect(state.scenario.configurations).toHaveLength(1);
  expect(state.comparability.comparable).toBe(false);
  expect(bannerText(state)).toContain("second configuration");
});

test("spawn placement snaps to the half-meter grid", () => {
  const state = newEditorState();
  placeGoal(state, 28.2, 2.1);
  expect(activeConfig(state).goals[0].center).toEqual({ x: 28, y: 2 });
  placeSpawn(state, 1.24, 22.9, 6.1, 5.76, 30);
  expect(activeConfig(state).spawn_areas[0].rect)
    .toEqual({ x: 1, y: 23, w: 6, h: 6 });
});

test("spawn before any goal is rejected with feedback", () => {
  const state = newEditorState();
  expect(placeSpawn(state, 1, 1, 4, 4, 10)).toBe(false);
  expect(state.feedback).toContain("goal first");
  expect(activeConfig(state).spawn_areas).toHaveLength(0);
});

test("out-of-bounds placement is rejected and leaves state untouched", () => {
  const state = authored();
  expect(placeSpawn(state, 28, 28, 6, 6, 10)).toBe(false);
  expect(state.feedback).toContain("leaves the environment");
  expect(activeConfig(state).spawn_areas).toHaveLength(1);
});

test("obstacle over the crowd is rejected", () => {
  const state = authored();
  expect(placeObstacle(state, 3, 25, 4, 4)).toBe(false);
  expect(state.feedback).toContain("spawn");
  expect(activeConfig(state).obstacles).toHaveLength(0);
});

test("goal ids stay unique", () => {
  const state = newEditorState();
  placeGoal(state, 5, 5);
  placeGoal(state, 10, 10);
  const ids = activeConfig(state).goals.map((g) => g.id);
  expect(ids).toEqual(["exit", "exit2"]);
});

test("tabs cap at four and the control reports it", () => {
  const state = authored();
  expect(duplicateTab(state)).toBe(true);
  expect(duplicateTab(state)).toBe(true);
  expect(duplicateTab(state)).toBe(true);
  expect(state.scenario.configurations).toHaveLength(MAX_TABS);
  expect(canAddTab(state)).toBe(false);
  expect(addTab(state)).toBe(false);
  expect(duplicateTab(state)).toBe(false);
  expect(state.feedback).toContain("limited to 4");
  expect(state.scenario.configurations).toHaveLength(MAX_TABS);
});

test("duplicate makes a deep copy under a fresh id", () => {
  const state = authored();
  duplicateTab(state);
  const [a, b] = state.scenario.configurations;
  expect(b.id).toBe("c2");
  expect(b.spawn_areas).toEqual(a.spawn_areas);
  b.spawn_areas[0].agent_count = 7;
  expect(a.spawn_areas[0].agent_count).toBe(30);
});

test("duplicated tab keeps the scenario comparable", () => {
  const state = authored();
  duplicateTab(state);
  expect(state.comparability.comparable).toBe(true);
  expect(bannerText(state)).toBeNull();
});

test("new blank tab inherits the room size", () => {
  const state = newEditorState();
  activeConfig(state).environment = { width: 44, height: 12 };
  addTab(state);
  expect(activeConfig(state).environment).toEqual({ width: 44, height: 12 });
});

test("deleting one agent group flips the banner", () => {
  const state = authored();
  duplicateTab(state); // comparable pair
  expect(bannerText(state)).toBeNull();
  placeSpawn(state, 10, 10, 3, 3, 5); // second group on tab c2
  expect(bannerText(state)).toBe("not comparable: agent totals differ: c1=30, c2=35");
  selectTab(state, 0);
  placeSpawn(state, 10, 10, 3, 3, 5); // match it on c1
  expect(bannerText(state)).toBeNull();
  deleteObject(state, { kind: "spawn", index: 1 });
  expect(state.comparability.comparable).toBe(false);
  expect(bannerText(state)).toBe("not comparable: agent totals differ: c1=30, c2=35");
});

test("the last tab cannot be removed", () => {
  const state = authored();
  expect(removeTab(state, 0)).toBe(false);
  expect(state.feedback).toContain("at least one");
  duplicateTab(state);
  expect(removeTab(state, 1)).toBe(true);
  expect(state.scenario.configurations).toHaveLength(1);
});

test("agent count edits are validated", () => {
  const state = authored();
  expect(editAgentCount(state, 0, 0)).toBe(false);
  expect(editAgentCount(state, 0, 2.5)).toBe(false);
  expect(activeConfig(state).spawn_areas[0].agent_count).toBe(30);
  expect(editAgentCount(state, 0, 45)).toBe(true);
  expect(activeConfig(state).spawn_areas[0].agent_count).toBe(45);
});

test("moving an object applies snap and respects bounds", () => {
  const state = authored();
  expect(moveObject(state, { kind: "goal", index: 0 }, -3.2, 0.3)).toBe(true);
  expect(activeConfig(state).goals[0].center).toEqual({ x: 25, y: 2.5 });
  expect(moveObject(state, { kind: "goal", index: 0 }, 100, 0)).toBe(false);
  expect(activeConfig(state).goals[0].center).toEqual({ x: 25, y: 2.5 });
});

test("a goal still referenced by a spawn area cannot be deleted", () => {
  const state = authored();
  expect(deleteObject(state, { kind: "goal", index: 0 })).toBe(false);
  expect(state.feedback).toContain("still referenced");
  deleteObject(state, { kind: "spawn", index: 0 });
  expect(deleteObject(state, { kind: "goal", index: 0 })).toBe(true);
  expect(activeConfig(state).goals).toHaveLength(0);
});

test("edits apply to the active tab only", () => {
  const state = authored();
  duplicateTab(state);
  placeObstacle(state, 15, 15, 2, 2);
  expect(state.scenario.configurations[1].obstacles).toHaveLength(1);
  expect(state.scenario.configurations[0].obstacles).toHaveLength(0);
});
