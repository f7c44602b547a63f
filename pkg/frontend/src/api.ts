// Thin client for the simulation service. The UI never computes metrics;
// everything it shows comes back through these calls.

import type { JobStatus, Manifest, ScenarioSpec } from "./types.js";

export const POLL_INTERVAL_MS = 500;

export class ApiError extends Error {
  status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

export type RunOptions = {
  runs?: number;
  seed?: number;
  params?: Record<string, number>;
};

export async function submitRun(
  base: string,
  scenario: ScenarioSpec,
  options: RunOptions = {},
): Promise<string> {
  const body: Record<string, unknown> = { scenario };
  if (options.runs !== undefined) body.runs = options.runs;
  if (options.seed !== undefined) body.seed = options.seed;
  if (options.params !== undefined) body.params = options.params;
  const response = await fetch(`${base}/api/scenarios/run`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) throw new ApiError(response.status, await detailOf(response));
  const data = (await response.json()) as { job_id: string };
  return data.job_id;
}

export async function getStatus(base: string, jobId: string): Promise<JobStatus> {
  const response = await fetch(`${base}/api/jobs/${jobId}`);
  if (!response.ok) throw new ApiError(response.status, await detailOf(response));
  return (await response.json()) as JobStatus;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export async function pollUntilDone(
  base: string,
  jobId: string,
  onProgress?: (status: JobStatus) => void,
  intervalMs: number = POLL_INTERVAL_MS,
): Promise<JobStatus> {
  for (;;) {
    const status = await getStatus(base, jobId);
    onProgress?.(status);
    if (status.state === "done") return status;
    if (status.state === "failed") {
      throw new ApiError(409, status.error ?? "job failed");
    }
    await sleep(intervalMs);
  }
}

export async function fetchResults(base: string, jobId: string): Promise<Manifest> {
  const response = await fetch(`${base}/api/jobs/${jobId}/results`);
  if (!response.ok) throw new ApiError(response.status, await detailOf(response));
  return (await response.json()) as Manifest;
}

export function occupancyUrl(base: string, jobId: string, cid: string): string {
  return `${base}/api/jobs/${jobId}/configs/${cid}/occupancy`;
}

export function trajectoriesUrl(base: string, jobId: string, cid: string): string {
  return `${base}/api/jobs/${jobId}/configs/${cid}/trajectories`;
}

export async function fetchOccupancy(
  base: string,
  jobId: string,
  cid: string,
): Promise<Uint8Array> {
  const response = await fetch(occupancyUrl(base, jobId, cid));
  if (!response.ok) throw new ApiError(response.status, await detailOf(response));
  return new Uint8Array(await response.arrayBuffer());
}

export async function fetchTrajectories(
  base: string,
  jobId: string,
  cid: string,
): Promise<string> {
  const response = await fetch(trajectoriesUrl(base, jobId, cid));
  if (!response.ok) throw new ApiError(response.status, await detailOf(response));
  return response.text();
}
