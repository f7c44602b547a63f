"""HTTP job service: submit a scenario, poll the job, fetch results.

POST /api/scenarios/run             -> 202 {job_id}
GET  /api/jobs/{id}                 -> status + progress
GET  /api/jobs/{id}/results         -> manifest JSON (409 until done)
GET  /api/jobs/{id}/configs/{cid}/occupancy    -> binary graymap
GET  /api/jobs/{id}/configs/{cid}/trajectories -> CSV

Comparability is recomputed here from the submitted configurations; a
"comparable" flag in the body is accepted and ignored, never trusted. Jobs
run one at a time in submission order; the runs inside a job fan out over
the worker pool. A done job's manifest is frozen to bytes once, so repeated
reads are byte-identical.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .engine import SimParams
from .results import (ResultsBundle, manifest_dict, occupancy_pgm,
                      save_results, trajectories_csv)
from .runner import run_scenario
from .scenario import Scenario
from .scenario_io import ScenarioFormatError, scenario_from_dict

DEFAULT_MAX_AGENTS = 10_000

_PARAM_KEYS = ("timestep", "preferred_speed", "max_speed", "agent_radius",
               "goal_reach_tolerance", "max_sim_time", "nav_cell")


@dataclass
class Job:
    id: str
    scenario: Scenario
    params: SimParams
    runs: int
    seed: int
    state: str = "queued"      # queued -> running -> done | failed
    done_configs: int = 0
    total_configs: int = 0
    error: str | None = None
    bundle: ResultsBundle | None = None
    manifest_bytes: bytes | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def status_dict(self) -> dict:
        with self.lock:
            doc = {
                "job_id": self.id,
                "state": self.state,
                "progress": {"completed": self.done_configs,
                             "total": self.total_configs},
            }
            if self.error is not None:
                doc["error"] = self.error
        return doc


def _bad_request(detail: str) -> Response:
    return Response(content=json.dumps({"detail": detail}),
                    status_code=400, media_type="application/json")


def _error(status: int, detail: str) -> Response:
    return Response(content=json.dumps({"detail": detail}),
                    status_code=status, media_type="application/json")


def _parse_int(body: dict, key: str, default: int, minimum: int) -> int:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(f"'{key}' must be an integer")
    if value < minimum:
        raise ScenarioFormatError(f"'{key}' must be >= {minimum}")
    return value


def _parse_params(body: dict) -> SimParams:
    overrides = body.get("params", {})
    if not isinstance(overrides, dict):
        raise ScenarioFormatError("'params' must be an object")
    unknown = set(overrides) - set(_PARAM_KEYS)
    if unknown:
        raise ScenarioFormatError(
            f"unknown params: {', '.join(sorted(unknown))}")
    try:
        return SimParams(**overrides)
    except (TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"bad params: {exc}")


def create_app(workers: int | None = None, results_dir: str | None = None,
               max_agents: int | None = None) -> FastAPI:
    """Build the service; env vars WORKERS / RESULTS_DIR / MAX_AGENTS fill
    any argument left as None."""
    if workers is None:
        workers = int(os.environ.get("WORKERS", "0")) or (os.cpu_count() or 2)
    if results_dir is None:
        results_dir = os.environ.get("RESULTS_DIR") or None
    if max_agents is None:
        max_agents = int(os.environ.get("MAX_AGENTS", str(DEFAULT_MAX_AGENTS)))

    app = FastAPI(title="evacsim service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    jobs: dict[str, Job] = {}
    jobs_lock = threading.Lock()
    # one job simulates at a time, in submission order; the runs inside it
    # spread over `workers` threads
    queue = ThreadPoolExecutor(max_workers=1)

    def execute(job: Job) -> None:
        with job.lock:
            job.state = "running"

        def progress(done: int, total: int) -> None:
            with job.lock:
                job.done_configs = done

        try:
            bundle = run_scenario(job.scenario, runs=job.runs, seed=job.seed,
                                  params=job.params, workers=workers,
                                  progress=progress)
        except Exception as exc:
            with job.lock:
                job.state = "failed"
                job.error = str(exc)
            return

        payload = json.dumps(manifest_dict(bundle, figures=False),
                             indent=2, sort_keys=True).encode() + b"\n"
        if results_dir:
            save_results(bundle, os.path.join(results_dir, job.id),
                         figures=False)
        with job.lock:
            job.bundle = bundle
            job.manifest_bytes = payload
            job.done_configs = job.total_configs
            job.state = "done"

    @app.post("/api/scenarios/run", status_code=202)
    async def submit(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            return _bad_request(f"body is not valid JSON: {exc.msg}")
        if not isinstance(body, dict) or "scenario" not in body:
            return _bad_request("body must be an object with a 'scenario' field")
        try:
            scenario = scenario_from_dict(body["scenario"])
            runs = _parse_int(body, "runs", 1, 1)
            seed = _parse_int(body, "seed", 0, 0)
            params = _parse_params(body)
        except ScenarioFormatError as exc:
            return _bad_request(str(exc))

        total_agents = sum(c.total_agents for c in scenario.configurations)
        if total_agents > max_agents:
            return _error(413, f"scenario totals {total_agents} agents; "
                               f"cap is {max_agents}")

        job = Job(id=secrets.token_urlsafe(16), scenario=scenario,
                  params=params, runs=runs, seed=seed,
                  total_configs=len(scenario.configurations))
        with jobs_lock:
            jobs[job.id] = job
        queue.submit(execute, job)
        return {"job_id": job.id}

    def _get_job(job_id: str) -> Job | None:
        with jobs_lock:
            return jobs.get(job_id)

    @app.get("/api/jobs/{job_id}")
    def status(job_id: str):
        job = _get_job(job_id)
        if job is None:
            return _error(404, "unknown job")
        return job.status_dict()

    @app.get("/api/jobs/{job_id}/results")
    def results(job_id: str):
        job = _get_job(job_id)
        if job is None:
            return _error(404, "unknown job")
        with job.lock:
            if job.state == "failed":
                return _error(409, f"job failed: {job.error}")
            if job.state != "done":
                return _error(409, f"job is {job.state}")
            payload = job.manifest_bytes
        return Response(content=payload, media_type="application/json")

    def _config_result(job_id: str, cid: str):
        job = _get_job(job_id)
        if job is None:
            return None, _error(404, "unknown job")
        with job.lock:
            if job.state == "failed":
                return None, _error(409, f"job failed: {job.error}")
            if job.state != "done":
                return None, _error(409, f"job is {job.state}")
            bundle = job.bundle
        for cr in bundle.configurations:
            if cr.config.id == cid:
                return cr, None
        return None, _error(404, "unknown configuration")

    @app.get("/api/jobs/{job_id}/configs/{cid}/occupancy")
    def occupancy(job_id: str, cid: str):
        cr, err = _config_result(job_id, cid)
        if err is not None:
            return err
        return Response(content=occupancy_pgm(cr.occupancy),
                        media_type="image/x-portable-graymap")

    @app.get("/api/jobs/{job_id}/configs/{cid}/trajectories")
    def trajectories(job_id: str, cid: str):
        cr, err = _config_result(job_id, cid)
        if err is not None:
            return err
        return Response(content=trajectories_csv(cr.first_trace),
                        media_type="text/csv")

    return app
