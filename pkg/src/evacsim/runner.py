"""Scenario execution: fan (configuration x run) tasks over a worker pool.

Run seeds enumerate seed .. seed + runs - 1, identical for every
configuration. Tasks are independent and collected by key, so the pool size
never changes the results. Comparability is decided up front; every run gets
its baseline and normalized values either way, but phi/xi exist only when
the configurations are comparable.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .engine import SimParams, run_reference_simulation, run_simulation
from .evaluation import (RunRecord, aggregate_runs, evaluate, prime_values,
                         rank_configurations)
from .metrics import compute_metrics, occupancy_map, trajectories
from .results import ConfigResult, ResultsBundle
from .scenario import Scenario, check_comparability
from .validation import validate_configuration

__all__ = ["ValidationFailure", "SimulationIncomplete", "run_scenario"]


class ValidationFailure(Exception):
    def __init__(self, reports):
        self.reports = reports
        lines = []
        for rep in reports:
            for v in rep.violations:
                lines.append(f"{rep.configuration_id}: {v}")
        super().__init__("; ".join(lines))


class SimulationIncomplete(Exception):
    """Some agents never reached their goal before the time cutoff."""

    def __init__(self, failures: dict[str, list[int]]):
        self.failures = failures
        detail = ", ".join(f"{cid} (runs {runs})" for cid, runs in failures.items())
        super().__init__(f"simulation incomplete: {detail}")


def run_scenario(scenario: Scenario, runs: int = 1, seed: int = 0,
                 params: SimParams | None = None, workers: int | None = None,
                 progress=None) -> ResultsBundle:
    """Simulate every configuration ``runs`` times and bundle the results.

    ``progress``, when given, is called as progress(done_configs, total_configs)
    each time a configuration finishes all of its runs.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    base = params if params is not None else SimParams()

    reports = [validate_configuration(c, base) for c in scenario.configurations]
    bad = [r for r in reports if not r.ok]
    if bad:
        raise ValidationFailure(bad)

    configs = scenario.configurations
    if len(configs) >= 2:
        comparability = check_comparability(configs)
        comparable = comparability.comparable
    else:
        # a single configuration is trivially scoreable against itself
        comparability = None
        comparable = True

    def task(ci: int, run_idx: int):
        config = configs[ci]
        p = replace(base, seed=seed + run_idx)
        trace = run_simulation(config, p)
        if not trace.completed:
            return trace, None, None
        metrics = compute_metrics(trace)
        reference = run_reference_simulation(config, p)
        if not comparable:
            primes = prime_values(metrics, reference, config.environment)
            return trace, metrics, (reference, primes, None, None)
        result = evaluate(metrics, reference, config.environment)
        return trace, metrics, (reference, result.primes, result.phi, result.xi)

    keys = [(ci, ri) for ci in range(len(configs)) for ri in range(runs)]
    pool = workers if workers is not None else min(len(keys), os.cpu_count() or 2)
    outputs: dict[tuple[int, int], tuple] = {}
    with ThreadPoolExecutor(max_workers=max(pool, 1)) as ex:
        futures = {key: ex.submit(task, *key) for key in keys}
        remaining = {ci: runs for ci in range(len(configs))}
        done_configs = 0
        for key in keys:
            outputs[key] = futures[key].result()
            remaining[key[0]] -= 1
            if remaining[key[0]] == 0:
                done_configs += 1
                if progress is not None:
                    progress(done_configs, len(configs))

    incomplete: dict[str, list[int]] = {}
    for (ci, ri), (trace, metrics, _) in outputs.items():
        if metrics is None:
            incomplete.setdefault(configs[ci].id, []).append(ri)
    if incomplete:
        raise SimulationIncomplete({cid: sorted(r) for cid, r in incomplete.items()})

    config_results = []
    for ci, config in enumerate(configs):
        records = []
        for ri in range(runs):
            trace, metrics, scored = outputs[(ci, ri)]
            reference, primes, run_phi, run_xi = scored
            records.append(RunRecord(config.id, ri, seed + ri, metrics,
                                     reference=reference, primes=primes,
                                     phi=run_phi, xi=run_xi))
        first_trace = outputs[(ci, 0)][0]
        config_results.append(ConfigResult(
            config=config,
            records=tuple(records),
            aggregate=aggregate_runs(records),
            occupancy=occupancy_map(first_trace, config.environment),
            trajectories=trajectories(first_trace),
            first_trace=first_trace,
        ))

    ranking = None
    if comparable:
        aggs = [cr.aggregate for cr in config_results]
        ranking = {
            "phi": [a.config_id for a in rank_configurations(aggs, "phi")],
            "xi": [a.config_id for a in rank_configurations(aggs, "xi")],
        }

    return ResultsBundle(
        scenario_name=scenario.name,
        comparable=comparable,
        comparability=comparability,
        runs=runs,
        seed=seed,
        configurations=tuple(config_results),
        ranking=ranking,
    )
