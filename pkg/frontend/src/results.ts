// Turns a results manifest into what the panel renders. Every number comes
// from the manifest; when the run was not comparable the phi/xi columns and
// ranking disappear and a banner explains why, mirroring the service.

import type { ConfigManifest, Manifest, MeanStd } from "./types.js";

export type MetricCell = { mean: number; std: number };

export type ResultRow = {
  id: string;
  agents: number;
  metrics: Record<string, MetricCell>; // t_g, t_bar, d_bar, s_bar, w_bar
  primes: Record<string, MetricCell>;
  phi: MetricCell | null;
  xi: MetricCell | null;
  bestPhi: boolean;
  bestXi: boolean;
};

export type ResultsView = {
  scenario: string;
  runs: number;
  seed: number;
  comparable: boolean;
  banner: string | null;
  rows: ResultRow[];
  ranking: { phi: string[]; xi: string[] } | null;
};

function cell(ms: MeanStd | undefined): MetricCell | null {
  return ms ? { mean: ms.mean, std: ms.std } : null;
}

function cells(table: Record<string, MeanStd> | undefined): Record<string, MetricCell> {
  const out: Record<string, MetricCell> = {};
  for (const [key, ms] of Object.entries(table ?? {})) {
    out[key] = { mean: ms.mean, std: ms.std };
  }
  return out;
}

function rowFor(config: ConfigManifest, manifest: Manifest): ResultRow {
  const showScores = manifest.comparable;
  return {
    id: config.id,
    agents: config.agents,
    metrics: cells(config.aggregate.metrics),
    primes: cells(config.aggregate.primes),
    phi: showScores ? cell(config.aggregate.phi) : null,
    xi: showScores ? cell(config.aggregate.xi) : null,
    bestPhi: showScores && manifest.ranking?.phi[0] === config.id,
    bestXi: showScores && manifest.ranking?.xi[0] === config.id,
  };
}

export function buildResultsView(manifest: Manifest): ResultsView {
  let banner: string | null = null;
  if (!manifest.comparable) {
    const details = manifest.comparability?.details ?? [];
    banner = details.length
      ? `not comparable: ${details.join("; ")}`
      : "not comparable: single configuration";
  }
  return {
    scenario: manifest.scenario,
    runs: manifest.runs,
    seed: manifest.seed,
    comparable: manifest.comparable,
    banner,
    rows: manifest.configurations.map((c) => rowFor(c, manifest)),
    ranking: manifest.comparable && manifest.ranking ? manifest.ranking : null,
  };
}

export function formatCell(cell: MetricCell | null, digits = 3): string {
  if (!cell) return "-";
  return `${cell.mean.toFixed(digits)} ±${cell.std.toFixed(digits)}`;
}

// trajectories.csv: time,agent_id,x,y,speed
export function parseTrajectoriesCsv(text: string): Map<number, Array<[number, number]>> {
  const paths = new Map<number, Array<[number, number]>>();
  const lines = text.split("\n");
  for (let i = 1; i < lines.length; i += 1) {
    const line = lines[i].trim();
    if (!line) continue;
    const parts = line.split(",");
    if (parts.length < 5) continue;
    const id = parseInt(parts[1], 10);
    const x = parseFloat(parts[2]);
    const y = parseFloat(parts[3]);
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    let path = paths.get(id);
    if (!path) {
      path = [];
      paths.set(id, path);
    }
    path.push([x, y]);
  }
  return paths;
}
