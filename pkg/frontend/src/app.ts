// DOM wiring: toolbar, tabs, canvas interactions, run/poll, results panel.
// All decisions live in editor.ts / scenario.ts / results.ts; this file
// only routes events in and paints state out.

import {
  fetchOccupancy,
  fetchResults,
  fetchTrajectories,
  pollUntilDone,
  submitRun,
} from "./api.js";
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
  type EditorState,
  type ToolMode,
} from "./editor.js";
import {
  drawConfiguration,
  drawGrid,
  drawOccupancy,
  drawTrajectories,
  fitTransform,
  hitTest,
  toMeters,
} from "./canvas.js";
import { parsePgm } from "./pgm.js";
import {
  buildResultsView,
  formatCell,
  parseTrajectoriesCsv,
  type ResultsView,
} from "./results.js";
import {
  checkComparability,
  parseScenario,
  serializeScenario,
  snap,
  validateScenario,
} from "./scenario.js";

const state: EditorState = newEditorState();
let runInFlight = false;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const canvas = $<HTMLCanvasElement>("floor");
const ctx = canvas.getContext("2d")!;

// ------------------------------------------------------------------ render

function render(): void {
  renderTabs();
  renderBanner();
  renderCanvas();
  renderInspector();
  $("feedback").textContent = state.feedback ?? "";
}

function renderTabs(): void {
  const strip = $("tabs");
  strip.innerHTML = "";
  state.scenario.configurations.forEach((config, i) => {
    const tab = document.createElement("button");
    tab.className = i === state.activeTab ? "tab active" : "tab";
    tab.textContent = config.id;
    tab.onclick = () => {
      selectTab(state, i);
      render();
    };
    const close = document.createElement("span");
    close.className = "close";
    close.textContent = "x";
    close.onclick = (ev) => {
      ev.stopPropagation();
      removeTab(state, i);
      render();
    };
    tab.appendChild(close);
    strip.appendChild(tab);
  });
  ($("add-tab") as HTMLButtonElement).disabled = !canAddTab(state);
  ($("dup-tab") as HTMLButtonElement).disabled = !canAddTab(state);
}

function renderBanner(): void {
  const banner = $("banner");
  const text = bannerText(state);
  banner.textContent = text ?? "configurations are comparable";
  banner.className = text ? "banner bad" : "banner good";
}

function renderCanvas(): void {
  const config = activeConfig(state);
  const view = fitTransform(config, canvas.width, canvas.height);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  drawGrid(ctx, config, view);
  drawConfiguration(ctx, config, view, state.selection);
  if (dragPreview) {
    ctx.save();
    ctx.strokeStyle = "#1565c0";
    ctx.setLineDash([4, 3]);
    const { x0, y0, x1, y1 } = dragPreview;
    ctx.strokeRect(
      Math.min(x0, x1), Math.min(y0, y1),
      Math.abs(x1 - x0), Math.abs(y1 - y0),
    );
    ctx.restore();
  }
}

function renderInspector(): void {
  const panel = $("inspector");
  const config = activeConfig(state);
  if (!state.selection) {
    panel.innerHTML =
      `<p>${config.spawn_areas.length} spawn areas, ` +
      `${config.goals.length} goals, ` +
      `${(config.obstacles ?? []).length} obstacles</p>`;
    return;
  }
  const { kind, index } = state.selection;
  if (kind === "spawn") {
    const area = config.spawn_areas[index];
    panel.innerHTML =
      `<label>agents <input id="agent-count" type="number" min="1" ` +
      `value="${area.agent_count}"></label>` +
      `<p>rect ${area.rect.w}x${area.rect.h} at ` +
      `(${area.rect.x}, ${area.rect.y}), goal '${area.goal_id}'</p>`;
    $<HTMLInputElement>("agent-count").onchange = (ev) => {
      const value = parseInt((ev.target as HTMLInputElement).value, 10);
      editAgentCount(state, index, value);
      render();
    };
  } else if (kind === "goal") {
    const goal = config.goals[index];
    panel.innerHTML =
      `<p>goal '${goal.id}' at (${goal.center.x}, ${goal.center.y}), ` +
      `radius ${goal.radius} m</p>`;
  } else {
    const ob = (config.obstacles ?? [])[index];
    panel.innerHTML =
      `<p>obstacle ${ob.size.w}x${ob.size.h} at ` +
      `(${ob.center.x}, ${ob.center.y})</p>`;
  }
}

// ------------------------------------------------------- canvas interaction

let dragPreview: { x0: number; y0: number; x1: number; y1: number } | null = null;
let dragStart: [number, number] | null = null; // meters

function canvasPoint(ev: MouseEvent): [number, number] {
  const box = canvas.getBoundingClientRect();
  const px = ((ev.clientX - box.left) / box.width) * canvas.width;
  const py = ((ev.clientY - box.top) / box.height) * canvas.height;
  const view = fitTransform(activeConfig(state), canvas.width, canvas.height);
  return toMeters(view, px, py);
}

canvas.addEventListener("mousedown", (ev) => {
  const [x, y] = canvasPoint(ev);
  const tool = state.tool;
  if (tool === "place-spawn" || tool === "place-obstacle") {
    dragStart = [x, y];
  } else if (tool === "move" || tool === "edit" || tool === "delete") {
    const hit = hitTest(activeConfig(state), x, y);
    if (tool === "delete") {
      if (hit) deleteObject(state, hit);
    } else {
      state.selection = hit;
      if (tool === "move" && hit) dragStart = [x, y];
    }
    render();
  }
});

canvas.addEventListener("mousemove", (ev) => {
  if (!dragStart) return;
  const [x, y] = canvasPoint(ev);
  const view = fitTransform(activeConfig(state), canvas.width, canvas.height);
  if (state.tool === "place-spawn" || state.tool === "place-obstacle") {
    const [px0, py0] = [dragStart[0] * view.scale, (view.height - dragStart[1]) * view.scale];
    const [px1, py1] = [x * view.scale, (view.height - y) * view.scale];
    dragPreview = { x0: px0, y0: py0, x1: px1, y1: py1 };
    renderCanvas();
  } else if (state.tool === "move" && state.selection) {
    moveObject(state, state.selection, x - dragStart[0], y - dragStart[1]);
    dragStart = [x, y];
    render();
  }
});

canvas.addEventListener("mouseup", (ev) => {
  const [x, y] = canvasPoint(ev);
  if (dragStart && state.tool === "place-spawn") {
    const x0 = Math.min(dragStart[0], x);
    const y0 = Math.min(dragStart[1], y);
    const w = Math.abs(x - dragStart[0]);
    const h = Math.abs(y - dragStart[1]);
    const count = parseInt($<HTMLInputElement>("default-agents").value, 10) || 10;
    placeSpawn(state, x0, y0, Math.max(snap(w), 1), Math.max(snap(h), 1), count);
  } else if (dragStart && state.tool === "place-obstacle") {
    const cx = (dragStart[0] + x) / 2;
    const cy = (dragStart[1] + y) / 2;
    const w = Math.abs(x - dragStart[0]);
    const h = Math.abs(y - dragStart[1]);
    placeObstacle(state, cx, cy, Math.max(snap(w), 0.5), Math.max(snap(h), 0.5));
  } else if (state.tool === "place-goal") {
    placeGoal(state, x, y);
  }
  dragStart = null;
  dragPreview = null;
  render();
});

// ----------------------------------------------------------------- toolbar

for (const mode of
  ["place-spawn", "place-goal", "place-obstacle", "move", "edit", "delete"] as ToolMode[]) {
  $(`tool-${mode}`).onclick = () => {
    state.tool = mode;
    document.querySelectorAll(".tool").forEach((el) =>
      el.classList.toggle("active", el.id === `tool-${mode}`));
    render();
  };
}

$("add-tab").onclick = () => {
  addTab(state);
  render();
};
$("dup-tab").onclick = () => {
  duplicateTab(state);
  render();
};

$("save").onclick = () => {
  const blob = new Blob([serializeScenario(state.scenario)], {
    type: "application/json",
  });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `${state.scenario.name || "scenario"}.json`;
  link.click();
  URL.revokeObjectURL(link.href);
};

$<HTMLInputElement>("load").onchange = async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    const loaded = parseScenario(await file.text());
    state.scenario = loaded;
    state.activeTab = 0;
    state.selection = null;
    state.feedback = null;
    state.comparability = checkComparability(loaded.configurations);
    render();
  } catch (err) {
    state.feedback = (err as Error).message;
    render();
  }
};

// -------------------------------------------------------------- run & poll

$("run").onclick = async () => {
  if (runInFlight) return;
  const problems = validateScenario(state.scenario);
  if (problems.length) {
    state.feedback = problems[0];
    render();
    return;
  }
  const base = $<HTMLInputElement>("server").value.replace(/\/+$/, "");
  const runs = parseInt($<HTMLInputElement>("runs").value, 10) || 1;
  const seed = parseInt($<HTMLInputElement>("seed").value, 10) || 0;
  const status = $("run-status");
  const button = $<HTMLButtonElement>("run");
  runInFlight = true;
  button.disabled = true;
  try {
    status.textContent = "submitting";
    const jobId = await submitRun(base, state.scenario, { runs, seed });
    state.lastJobId = jobId;
    const final = await pollUntilDone(base, jobId, (s) => {
      status.textContent =
        `${s.state} (${s.progress.completed}/${s.progress.total})`;
    });
    status.textContent = final.state;
    const manifest = await fetchResults(base, jobId);
    await renderResults(base, jobId, buildResultsView(manifest));
  } catch (err) {
    status.textContent = `error: ${(err as Error).message}`;
  } finally {
    runInFlight = false;
    button.disabled = false;
  }
};

async function renderResults(
  base: string,
  jobId: string,
  view: ResultsView,
): Promise<void> {
  const panel = $("results");
  const metricCols = ["t_g", "t_bar", "d_bar", "s_bar", "w_bar"];
  const primeCols = ["t_g_prime", "t_bar_prime", "s_bar_prime", "w_bar_prime"];
  let html = `<h2>${view.scenario} (${view.runs} runs, seed ${view.seed})</h2>`;
  if (view.banner) {
    html += `<div class="banner bad">${view.banner}</div>`;
  }
  html += "<table><tr><th>config</th>";
  for (const col of metricCols.concat(primeCols)) html += `<th>${col}</th>`;
  if (view.comparable) html += "<th>phi</th><th>xi</th>";
  html += "</tr>";
  for (const row of view.rows) {
    html += `<tr><td>${row.id}${row.bestPhi ? ' <span class="badge">best phi</span>' : ""}` +
      `${row.bestXi ? ' <span class="badge alt">best xi</span>' : ""}</td>`;
    for (const col of metricCols) html += `<td>${formatCell(row.metrics[col] ?? null)}</td>`;
    for (const col of primeCols) html += `<td>${formatCell(row.primes[col] ?? null)}</td>`;
    if (view.comparable) {
      html += `<td>${formatCell(row.phi)}</td><td>${formatCell(row.xi)}</td>`;
    }
    html += "</tr>";
  }
  html += "</table>";
  if (view.ranking) {
    html += `<p>phi ranking: ${view.ranking.phi.join(" &lt; ")}<br>` +
      `xi ranking: ${view.ranking.xi.join(" &lt; ")}</p>`;
  }
  html += '<div id="overlays" class="overlays"></div>';
  panel.innerHTML = html;

  const overlays = $("overlays");
  for (const row of view.rows) {
    const config = state.scenario.configurations.find((c) => c.id === row.id);
    if (!config) continue;
    const card = document.createElement("div");
    card.className = "overlay-card";
    const title = document.createElement("h3");
    title.textContent = row.id;
    card.appendChild(title);
    const small = document.createElement("canvas");
    small.width = 260;
    small.height = 260;
    card.appendChild(small);
    const note = document.createElement("p");
    note.className = "legend";
    note.textContent = "heatmap: white = empty, red = busiest cell of this configuration";
    card.appendChild(note);
    overlays.appendChild(card);
    const sctx = small.getContext("2d")!;
    const sview = fitTransform(config, small.width, small.height);
    drawGrid(sctx, config, sview);
    try {
      const pgm = parsePgm(await fetchOccupancy(base, jobId, row.id));
      drawOccupancy(sctx, pgm, sview);
      const csv = await fetchTrajectories(base, jobId, row.id);
      drawTrajectories(sctx, parseTrajectoriesCsv(csv), sview);
    } catch (err) {
      note.textContent = `overlay failed: ${(err as Error).message}`;
    }
    drawConfiguration(sctx, config, sview, null);
  }
}

render();
