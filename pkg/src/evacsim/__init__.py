"""evacsim: crowd evacuation simulation and comparative evaluation."""

from .engine import (AgentState, AgentSummary, Frame, ReferenceResult,
                     SimParams, SimulationTrace, SpawnError,
                     run_reference_simulation, run_simulation,
                     select_reference_agent, simulate_agents, spawn_agents,
                     trace_digest)
from .evaluation import (EvaluationResult, MeanStd, PrimeBundle, RunAggregate,
                         RunRecord, aggregate_runs, evaluate, phi,
                         prime_values, rank_configurations, xi)
from .geometry import Rect, Vec2
from .metrics import (MetricsBundle, MetricsError, OccupancyGrid,
                      TrajectorySet, average_density, average_distance,
                      average_speed, average_time, compute_metrics,
                      occupancy_map, total_time, trajectories)
from .navgrid import NavGrid, NoPathError, build_nav_grid, plan_path
from .results import (ConfigResult, ResultsBundle, load_manifest,
                      manifest_dict, save_results)
from .runner import SimulationIncomplete, ValidationFailure, run_scenario
from .scenario import (ComparabilityResult, Configuration, Environment, Goal,
                       Obstacle, ReferenceAgentSpec, Scenario, SpawnArea,
                       check_comparability, deep_copy_configuration)
from .scenario_io import (ScenarioFormatError, load_scenario, save_scenario,
                          scenario_from_dict, scenario_to_dict)
from .validation import ValidationReport, validate_configuration

__version__ = "0.1.0"
