import { expect, test } from "vitest";

import { buildResultsView, formatCell, parseTrajectoriesCsv } from "../src/results.js";
import type { Manifest } from "../src/types.js";

function ms(mean: number, std = 0.01) {
  return { mean, std };
}

function configEntry(id: string, phi: number, xi: number) {
  return {
    id,
    agents: 30,
    runs: [],
    aggregate: {
      metrics: { t_g: ms(50), t_bar: ms(40), d_bar: ms(1.1), s_bar: ms(0.9), w_bar: ms(35) },
      reference: { t_ar: ms(32), s_ar: ms(1.15), w_ar: ms(37) },
      primes: {
        t_g_prime: ms(1.6), t_bar_prime: ms(1.25),
        s_bar_prime: ms(3.6), w_bar_prime: ms(0.83),
      },
      phi: ms(phi),
      xi: ms(xi),
    },
    files: {},
  };
}

function comparableManifest(): Manifest {
  return {
    scenario: "pair",
    comparable: true,
    runs: 3,
    seed: 0,
    configurations: [configEntry("a", 1.32, 1.54), configEntry("b", 1.23, 1.68)],
    comparability: {
      criteria: { agent_total: true, goal_count: true, surface_area: true },
      details: [],
    },
    ranking: { phi: ["b", "a"], xi: ["a", "b"] },
  };
}

test("comparable manifest yields score columns and best badges", () => {
  const view = buildResultsView(comparableManifest());
  expect(view.comparable).toBe(true);
  expect(view.banner).toBeNull();
  expect(view.ranking).toEqual({ phi: ["b", "a"], xi: ["a", "b"] });
  const [a, b] = view.rows;
  expect(a.phi?.mean).toBeCloseTo(1.32);
  expect(a.bestPhi).toBe(false);
  expect(a.bestXi).toBe(true);
  expect(b.bestPhi).toBe(true);
  expect(b.bestXi).toBe(false);
  expect(a.metrics.t_g.mean).toBe(50);
  expect(a.primes.t_g_prime.mean).toBeCloseTo(1.6);
});

test("non-comparable manifest suppresses scores and explains why", () => {
  const manifest = comparableManifest();
  manifest.comparable = false;
  delete manifest.ranking;
  manifest.comparability = {
    criteria: { agent_total: false, goal_count: true, surface_area: true },
    details: ["agent totals differ: a=30, b=25"],
  };
  // a defensive view: even if aggregates carried scores they must not show
  const view = buildResultsView(manifest);
  expect(view.comparable).toBe(false);
  expect(view.banner).toBe("not comparable: agent totals differ: a=30, b=25");
  expect(view.ranking).toBeNull();
  for (const row of view.rows) {
    expect(row.phi).toBeNull();
    expect(row.xi).toBeNull();
    expect(row.bestPhi).toBe(false);
    expect(row.metrics.t_g.mean).toBe(50); // raw metrics stay visible
  }
});

test("single-configuration manifest gets a generic banner", () => {
  const manifest = comparableManifest();
  manifest.comparable = false;
  manifest.configurations = [configEntry("a", 1.32, 1.54)];
  delete manifest.ranking;
  delete manifest.comparability;
  const view = buildResultsView(manifest);
  expect(view.banner).toBe("not comparable: single configuration");
});

test("formatCell renders mean with spread or a placeholder", () => {
  expect(formatCell({ mean: 1.3456, std: 0.0123 })).toBe("1.346 ±0.012");
  expect(formatCell(null)).toBe("-");
});

test("trajectories csv parses into per-agent paths", () => {
  const csv = [
    "time,agent_id,x,y,speed",
    "0.1,0,1.0,2.0,1.1",
    "0.2,0,1.1,2.1,1.1",
    "0.1,3,5.0,5.0,0.9",
    "",
  ].join("\n");
  const paths = parseTrajectoriesCsv(csv);
  expect([...paths.keys()].sort()).toEqual([0, 3]);
  expect(paths.get(0)).toEqual([[1.0, 2.0], [1.1, 2.1]]);
  expect(paths.get(3)).toEqual([[5.0, 5.0]]);
});
