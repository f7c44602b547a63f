"""Shared fixtures: the bundled scenario files, simulated once per session."""

from __future__ import annotations

import time
from pathlib import Path

import pytest

from evacsim import load_scenario, run_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture(scope="session")
def workload_seconds() -> dict:
    # wall-clock cost of building each session bundle, keyed by scenario name
    return {}


def _timed_bundle(name: str, clock: dict):
    scenario = load_scenario(SCENARIO_DIR / f"{name}.json")
    start = time.perf_counter()
    bundle = run_scenario(scenario, runs=10, seed=0)
    clock[name] = time.perf_counter() - start
    return bundle


@pytest.fixture(scope="session")
def s1_bundle(workload_seconds):
    return _timed_bundle("s1", workload_seconds)


@pytest.fixture(scope="session")
def s2_bundle(workload_seconds):
    return _timed_bundle("s2", workload_seconds)


@pytest.fixture(scope="session")
def s3c_trace():
    """One obstacle-course run, shared by engine and metrics tests."""
    from evacsim import SimParams, run_simulation

    scenario = load_scenario(SCENARIO_DIR / "s3.json")
    config = next(c for c in scenario.configurations if c.id == "s3-c")
    return config, run_simulation(config, SimParams(seed=0))
