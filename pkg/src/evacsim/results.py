"""Results bundle and its on-disk form.

A results directory is written deterministically: stable key order, floats
rounded to six decimals, no timestamps. Running the same scenario with the
same flags twice produces byte-identical manifests.

    out/
      manifest.json
      comparison.csv            only when the configurations are comparable
      configs/<id>/metrics.csv  one row per run
      configs/<id>/trajectories.csv, agents.csv, occupancy.txt, occupancy.pgm
      configs/<id>/occupancy.png, trajectories.png   (unless figures=False)

Occupancy text and PGM rows run top-down (first row is the highest y band).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .engine import SimulationTrace
from .evaluation import MeanStd, RunAggregate, RunRecord
from .metrics import OccupancyGrid, TrajectorySet
from .scenario import ComparabilityResult, Configuration

__all__ = ["ConfigResult", "ResultsBundle", "save_results", "manifest_dict",
           "load_manifest", "occupancy_text", "occupancy_pgm", "trajectories_csv",
           "agent_summary_csv"]


@dataclass(frozen=True)
class ConfigResult:
    config: Configuration
    records: tuple[RunRecord, ...]
    aggregate: RunAggregate
    occupancy: OccupancyGrid
    trajectories: TrajectorySet
    first_trace: SimulationTrace


@dataclass(frozen=True)
class ResultsBundle:
    scenario_name: str
    comparable: bool
    comparability: ComparabilityResult | None
    runs: int
    seed: int
    configurations: tuple[ConfigResult, ...]
    ranking: dict[str, list[str]] | None  # {"phi": [...], "xi": [...]} when comparable

    def __post_init__(self):
        if self.comparable != (self.ranking is not None):
            raise ValueError("ranking must be present exactly when comparable")


def _round_floats(obj):
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _mean_std_dict(ms: MeanStd) -> dict:
    return {"mean": ms.mean, "std": ms.std}


def _record_dict(rec: RunRecord) -> dict:
    out: dict = {
        "run": rec.run,
        "seed": rec.seed,
        "metrics": {k: getattr(rec.metrics, k)
                    for k in ("t_g", "t_bar", "d_bar", "s_bar", "w_bar")},
    }
    if rec.reference is not None:
        out["reference"] = {k: getattr(rec.reference, k)
                            for k in ("t_ar", "s_ar", "w_ar")}
        out["primes"] = rec.primes.as_dict()
    if rec.phi is not None:
        out["phi"] = rec.phi
        out["xi"] = rec.xi
    return out


def _aggregate_dict(agg: RunAggregate) -> dict:
    out: dict = {"metrics": {k: _mean_std_dict(v) for k, v in agg.metrics.items()}}
    if agg.reference is not None:
        out["reference"] = {k: _mean_std_dict(v) for k, v in agg.reference.items()}
        out["primes"] = {k: _mean_std_dict(v) for k, v in agg.primes.items()}
    if agg.phi is not None:
        out["phi"] = _mean_std_dict(agg.phi)
        out["xi"] = _mean_std_dict(agg.xi)
    return out


def _config_files(cid: str, figures: bool) -> dict[str, str]:
    base = f"configs/{cid}"
    files = {
        "metrics_csv": f"{base}/metrics.csv",
        "trajectories_csv": f"{base}/trajectories.csv",
        "agents_csv": f"{base}/agents.csv",
        "occupancy_txt": f"{base}/occupancy.txt",
        "occupancy_pgm": f"{base}/occupancy.pgm",
    }
    if figures:
        files["occupancy_png"] = f"{base}/occupancy.png"
        files["trajectories_png"] = f"{base}/trajectories.png"
    return files


def manifest_dict(bundle: ResultsBundle, figures: bool = True) -> dict:
    """The manifest as a plain dict, floats rounded for stable serialization."""
    doc: dict = {
        "scenario": bundle.scenario_name,
        "comparable": bundle.comparable,
        "runs": bundle.runs,
        "seed": bundle.seed,
        "configurations": [
            {
                "id": cr.config.id,
                "agents": cr.config.total_agents,
                "runs": [_record_dict(r) for r in cr.records],
                "aggregate": _aggregate_dict(cr.aggregate),
                "files": _config_files(cr.config.id, figures),
            } for cr in bundle.configurations],
    }
    if bundle.comparability is not None:
        doc["comparability"] = {
            "criteria": dict(bundle.comparability.criteria),
            "details": list(bundle.comparability.details),
        }
    if bundle.comparable:
        doc["ranking"] = {k: list(v) for k, v in bundle.ranking.items()}
    return _round_floats(doc)


def occupancy_text(grid: OccupancyGrid) -> str:
    """Space-separated integer rows, top row first."""
    counts = grid.counts
    lines = []
    for iy in range(counts.shape[1] - 1, -1, -1):
        lines.append(" ".join(str(int(c)) for c in counts[:, iy]))
    return "\n".join(lines) + "\n"


def occupancy_pgm(grid: OccupancyGrid) -> bytes:
    """Binary 8-bit graymap, counts scaled so the busiest cell is white."""
    counts = grid.counts
    peak = int(counts.max()) if counts.size else 0
    if peak > 0:
        img = np.round(counts.astype(float) / peak * 255.0).astype(np.uint8)
    else:
        img = np.zeros_like(counts, dtype=np.uint8)
    rows = img.T[::-1]  # image convention: first row is the top of the map
    header = f"P5\n{counts.shape[0]} {counts.shape[1]}\n255\n".encode()
    return header + rows.tobytes()


def trajectories_csv(trace: SimulationTrace) -> str:
    lines = ["time,agent_id,x,y,speed"]
    for fr in trace.frames:
        for k, aid in enumerate(fr.ids):
            lines.append(f"{_fmt(fr.time)},{int(aid)},{_fmt(fr.positions[k, 0])},"
                         f"{_fmt(fr.positions[k, 1])},{_fmt(fr.speeds[k])}")
    return "\n".join(lines) + "\n"


def agent_summary_csv(trace: SimulationTrace) -> str:
    lines = ["agent_id,t_k,w_k,s_k"]
    for aid in sorted(trace.per_agent):
        s = trace.per_agent[aid]
        lines.append(f"{aid},{_fmt(s.t_k)},{_fmt(s.w_k)},{_fmt(s.s_k)}")
    return "\n".join(lines) + "\n"


def _metrics_csv(records) -> str:
    lines = ["config_id,run,t_g,t_bar,d_bar,s_bar,w_bar"]
    for r in records:
        m = r.metrics
        lines.append(f"{r.config_id},{r.run},{_fmt(m.t_g)},{_fmt(m.t_bar)},"
                     f"{_fmt(m.d_bar)},{_fmt(m.s_bar)},{_fmt(m.w_bar)}")
    return "\n".join(lines) + "\n"


def _comparison_csv(bundle: ResultsBundle) -> str:
    phi_rank = {cid: i + 1 for i, cid in enumerate(bundle.ranking["phi"])}
    xi_rank = {cid: i + 1 for i, cid in enumerate(bundle.ranking["xi"])}
    lines = ["config_id,t_g_prime,t_bar_prime,d_bar,s_bar_prime,w_bar_prime,"
             "phi,xi,phi_rank,xi_rank"]
    for cr in bundle.configurations:
        agg = cr.aggregate
        cid = cr.config.id
        lines.append(
            f"{cid},{_fmt(agg.primes['t_g_prime'].mean)},"
            f"{_fmt(agg.primes['t_bar_prime'].mean)},"
            f"{_fmt(agg.metrics['d_bar'].mean)},"
            f"{_fmt(agg.primes['s_bar_prime'].mean)},"
            f"{_fmt(agg.primes['w_bar_prime'].mean)},"
            f"{_fmt(agg.phi.mean)},{_fmt(agg.xi.mean)},"
            f"{phi_rank[cid]},{xi_rank[cid]}")
    return "\n".join(lines) + "\n"


def save_results(bundle: ResultsBundle, out_dir: str | Path,
                 figures: bool = True) -> Path:
    """Write the full results tree; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for cr in bundle.configurations:
        cdir = out / "configs" / cr.config.id
        cdir.mkdir(parents=True, exist_ok=True)
        (cdir / "metrics.csv").write_text(_metrics_csv(cr.records), encoding="utf-8")
        (cdir / "trajectories.csv").write_text(trajectories_csv(cr.first_trace),
                                               encoding="utf-8")
        (cdir / "agents.csv").write_text(agent_summary_csv(cr.first_trace),
                                         encoding="utf-8")
        (cdir / "occupancy.txt").write_text(occupancy_text(cr.occupancy),
                                            encoding="utf-8")
        (cdir / "occupancy.pgm").write_bytes(occupancy_pgm(cr.occupancy))
        if figures:
            from . import figures as figmod
            figmod.render_occupancy(cr.occupancy, cr.config,
                                    cdir / "occupancy.png")
            figmod.render_trajectories(cr.trajectories, cr.config,
                                       cdir / "trajectories.png")

    if bundle.comparable:
        (out / "comparison.csv").write_text(_comparison_csv(bundle),
                                            encoding="utf-8")
    manifest_path = out / "manifest.json"
    manifest_path.write_text(
        json.dumps(manifest_dict(bundle, figures), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return manifest_path


def load_manifest(results_dir: str | Path) -> dict:
    path = Path(results_dir) / "manifest.json"
    if not path.exists():
        raise FileNotFoundError(f"no manifest.json under {results_dir}")
    return json.loads(path.read_text(encoding="utf-8"))
