"""Deterministic lab for potential-driven parallel monodromy solving."""

from .fabricate import FabricationConfig, fabricate, sample_duration
from .graph import HomotopyGraph, SolverState, Task, validate_state
from .oracle import DatafileError, OracleData, load_oracle, save_oracle
from .potential import (ExpectationLedger, PotentialKind, increment_batch,
                        increment_no_failures, increment_with_failures,
                        increment_with_failures_estimate,
                        new_solution_probability, potential_of,
                        recompute_ledger)
from .harvest import (AmbiguityError, TrackingError, TrackResult,
                      TrackSettings, UnivariateFamily, harvest,
                      match_solution, seed_instance, track_path)
from .roots import RootFindingError, reference_roots
from .simulate import (PackedOracle, RunMetrics, SimulationConfig,
                       compute_metrics, pack_oracle, run,
                       run_sequential_baseline)

__version__ = "0.1.0"
