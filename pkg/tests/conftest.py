"""Shared builders for small, fully explicit oracle instances."""
from __future__ import annotations

import numpy as np
import pytest

from mslab.graph import HomotopyGraph, SolverState, Task, validate_state
from mslab.oracle import OracleData


def make_oracle(graph: HomotopyGraph, permutations, flags=None, durations=None,
                alpha: float = 1.0) -> OracleData:
    """Explicit oracle with default all-success flags and unit durations."""
    d = graph.degree
    if flags is None:
        flags = [[True] * d for _ in range(graph.n_directed)]
    if durations is None:
        durations = [[1] * d for _ in range(graph.n_directed)]
    return OracleData(
        graph=graph,
        permutations=[list(p) for p in permutations],
        success_flags=[list(f) for f in flags],
        durations=[list(t) for t in durations],
        provenance={"alpha": alpha, "source": "test"},
    )


def k_graph(nodes: int, degree: int, multiplicity: int = 1) -> HomotopyGraph:
    return HomotopyGraph.complete(nodes, degree, multiplicity)


def random_valid_state(rng: np.random.Generator, graph: HomotopyGraph,
                       max_inflight: int = 3,
                       max_failures: int = 2) -> SolverState:
    """Random solver state satisfying every invariant of ``validate_state``."""
    d = graph.degree
    known = [set(map(int, rng.choice(d, size=int(rng.integers(0, d + 1)),
                                     replace=False)))
             for _ in range(graph.node_count)]
    correspondences: list[set[tuple[int, int]]] = []
    for lo, hi in graph.edges:
        left = sorted(known[lo])
        right = sorted(known[hi])
        size = int(rng.integers(0, min(len(left), len(right)) + 1))
        li = rng.choice(len(left), size=size, replace=False) if size else []
        ri = rng.permutation(len(right))[:size]
        correspondences.append({(left[int(a)], right[int(b)])
                                for a, b in zip(li, ri)})
    state = SolverState(
        known=known,
        correspondences=correspondences,
        inflight=[],
        failures=[set() for _ in range(graph.n_directed)],
    )
    # candidate tasks: known start, no correspondence yet for that start
    candidates = []
    for de in range(graph.n_directed):
        tracked = state.tail_indices(graph, de)
        for s in sorted(known[graph.tail(de)]):
            if s not in tracked:
                candidates.append((s, de))
    candidates = [candidates[int(i)] for i in rng.permutation(len(candidates))]
    n_fail = min(max_failures, len(candidates))
    n_fail = int(rng.integers(0, n_fail + 1))
    for s, de in candidates[:n_fail]:
        state.failures[de].add(s)
    rest = candidates[n_fail:]
    n_fly = min(max_inflight, len(rest))
    n_fly = int(rng.integers(0, n_fly + 1))
    for s, de in rest[:n_fly]:
        # the ledger needs candidate capacity: d - |C| - |F| - inflight > 0
        e = de >> 1
        used = (len(state.correspondences[e]) + len(state.failures[de])
                + sum(1 for t in state.inflight if t.dedge == de))
        if d - used > 1:
            state.inflight.append(Task(start=s, dedge=de))
    assert validate_state(state, graph) == []
    return state


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
