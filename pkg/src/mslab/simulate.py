"""Discrete-event simulation of the scheduling algorithm over virtual threads.

A run replays an oracle datafile: whenever a simulated thread frees up and no
node is saturated yet, the highest-potential candidate task is scheduled with
its precomputed duration; outcomes come from the oracle's flags and
permutations. Runs are deterministic functions of (oracle, config, seeds).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import engine
from .graph import HomotopyGraph, SolverState, Task
from .oracle import OracleData
from .potential import PotentialKind

_STATUS_NAMES = {
    engine.STATUS_SATURATED: "saturated",
    engine.STATUS_EXHAUSTED: "exhausted",
    engine.STATUS_BUDGET: "budget-exceeded",
}


@dataclass(frozen=True)
class SimulationConfig:
    threads: int = 1
    potential: PotentialKind = field(default_factory=PotentialKind)
    track_budget: int | None = None     # None -> 100 * N * d
    tie_seed: int = 0                   # recorded in outputs; ties themselves
                                        # are broken deterministically
    engine: str = "auto"

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("thread count must be >= 1")
        if self.track_budget is not None and self.track_budget < 1:
            raise ValueError("track budget must be >= 1")


@dataclass
class RunMetrics:
    wall_time: int
    tracks: int
    successes: int
    failures: int
    busy: list[int]
    idle: list[int]
    status: str                 # "saturated" | "exhausted" | "budget-exceeded"
    saturated_node: int | None
    known_counts: list[int]
    # successful tracks whose correspondence had already been found from the
    # opposite direction while they were in flight; they add no pair, so
    # sum(|C_e|) == successes - redundant_successes
    redundant_successes: int = 0

    @property
    def idle_fraction(self) -> float:
        if self.wall_time == 0:
            return 0.0
        return sum(self.idle) / (self.wall_time * len(self.idle))


@dataclass
class PackedOracle:
    """Array form of an oracle instance, shared by both kernels."""

    graph: HomotopyGraph
    tails: np.ndarray
    heads: np.ndarray
    images: np.ndarray      # [n_directed, d] target index per start
    flags: np.ndarray       # [n_directed, d] uint8
    durations: np.ndarray   # [n_directed, d] int64
    alpha: float


def pack_oracle(oracle: OracleData) -> PackedOracle:
    oracle.validate()
    g = oracle.graph
    d = g.degree
    nde = g.n_directed
    tails = np.empty(nde, dtype=np.int32)
    heads = np.empty(nde, dtype=np.int32)
    images = np.empty((nde, d), dtype=np.int32)
    for e, (lo, hi) in enumerate(g.edges):
        fwd = np.asarray(oracle.permutations[e], dtype=np.int32)
        inv = np.empty(d, dtype=np.int32)
        inv[fwd] = np.arange(d, dtype=np.int32)
        tails[2 * e], heads[2 * e] = lo, hi
        tails[2 * e + 1], heads[2 * e + 1] = hi, lo
        images[2 * e] = fwd
        images[2 * e + 1] = inv
    flags = np.asarray(oracle.success_flags, dtype=np.uint8)
    durations = np.asarray(oracle.durations, dtype=np.int64)
    return PackedOracle(g, tails, heads, images, flags, durations, oracle.alpha())


def _potential_code(kind: PotentialKind) -> tuple[int, float]:
    if kind.kind == "greedy":
        return engine.POT_GREEDY, 0.0
    if kind.kind == "ordinal":
        return engine.POT_ORDINAL, 0.0
    if np.isinf(kind.lam):
        return engine.POT_WEIGHTED_INF, 0.0
    return engine.POT_WEIGHTED, float(kind.lam)


def run(oracle: OracleData | PackedOracle, config: SimulationConfig,
        seed_node: int = 0, seed_solution: int = 0) -> tuple[RunMetrics, SolverState]:
    packed = oracle if isinstance(oracle, PackedOracle) else pack_oracle(oracle)
    g = packed.graph
    if not 0 <= seed_node < g.node_count or not 0 <= seed_solution < g.degree:
        raise ValueError("invalid seed solution")
    budget = config.track_budget
    if budget is None:
        budget = 100 * g.node_count * g.degree
    pot_code, lam = _potential_code(config.potential)
    # appearance order: seed node first, the rest by node id
    rank = np.empty(g.node_count, dtype=np.int32)
    order = [seed_node] + [v for v in range(g.node_count) if v != seed_node]
    for i, v in enumerate(order):
        rank[v] = i + 1
    _, kernel = engine.get_kernel(config.engine)
    res = kernel(g.degree, g.node_count, packed.tails, packed.heads,
                 packed.images, packed.flags, packed.durations,
                 config.threads, pot_code, lam,
                 config.potential.dynamic_norm, rank,
                 seed_node, seed_solution, budget, packed.alpha)

    state = SolverState(
        known=[set(order_v) for order_v in res["q_order"]],
        correspondences=[set() for _ in range(g.n_edges)],
        inflight=[Task(start=s, dedge=de, scheduled_at=t0, duration=dur)
                  for s, de, t0, dur in res["inflight_left"]],
        failures=[set(f) for f in res["f_lists"]],
    )
    for e, i, j in res["c_pairs"]:
        state.correspondences[e].add((i, j))
    wall = res["wall"]
    busy = list(res["busy"])
    metrics = RunMetrics(
        wall_time=wall,
        tracks=res["tracks"],
        successes=res["successes"],
        failures=res["failures"],
        busy=busy,
        idle=[wall - b for b in busy],
        status=_STATUS_NAMES[res["status"]],
        saturated_node=res["sat_node"] if res["sat_node"] >= 0 else None,
        known_counts=[len(q) for q in res["q_order"]],
        redundant_successes=res["redundant"],
    )
    return metrics, state


def run_sequential_baseline(oracle: OracleData | PackedOracle,
                            config: SimulationConfig,
                            seed_node: int = 0, seed_solution: int = 0) -> RunMetrics:
    """Same oracle and selection rule on a single thread."""
    metrics, _ = run(oracle, replace(config, threads=1), seed_node, seed_solution)
    return metrics


def compute_metrics(sequential: RunMetrics, parallel: RunMetrics,
                    threads: int) -> tuple[float, float, float]:
    """(speedup, efficiency, idle fraction) of a parallel run vs its baseline."""
    if parallel.wall_time == 0:
        raise ZeroDivisionError("parallel wall time is zero")
    speedup = sequential.wall_time / parallel.wall_time
    efficiency = speedup / threads
    return speedup, efficiency, parallel.idle_fraction
