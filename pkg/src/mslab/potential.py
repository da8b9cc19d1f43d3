"""Expected-solution-count bookkeeping and task-selection potentials.

The ledger maintains, per node, the expected number of known solutions once
every in-flight task completes. The increment used everywhere is the exact
one: appending a task on directed edge ``de`` with head ``v`` multiplies the
deficit ``d - EN_v`` by ``1 - alpha / (d - |C_e| - alpha * r)`` where ``r``
counts tasks already in flight on ``de``. This is exact under the
uniform-correspondence and independent-failure model (verified against
exhaustive enumeration in the tests), reduces to the classical recursion at
``alpha = 1``, and is consistent with the batch rule for any ``alpha``.

``increment_with_failures_estimate`` keeps the alternative closed form that
averages a binomial failure count in isolation; it ignores the correlation
between in-flight failures and discovered counts and is retained only for
comparison (see the discrepancy report in the test suite).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import HomotopyGraph, SolverState, Task


def new_solution_probability(d: int, q_head: int, c_e: int) -> float:
    """Chance a single track lands on an unknown head solution."""
    if c_e >= d:
        raise ValueError("edge saturated: no untracked correspondence remains")
    if not 0 <= c_e <= q_head <= d:
        raise ValueError("need 0 <= |C_e| <= |Q_head| <= d")
    return (d - q_head) / (d - c_e)


def increment_no_failures(d: int, en_v: float, c_e: int, inflight: int) -> float:
    """Expected-count increase from one more task on a directed edge (alpha=1)."""
    denom = d - c_e - inflight
    if denom <= 0:
        raise ValueError("no capacity on directed edge")
    if en_v > d:
        raise ValueError("EN_v exceeds degree")
    return (d - en_v) / denom


def increment_with_failures(d: int, en_v: float, c_e: int, f_count: int,
                            inflight: int, alpha: float) -> float:
    """Exact expected-count increase under success probability ``alpha``.

    ``f_count`` is accepted for precondition checking but does not enter the
    value: failed starts reveal nothing about where untracked correspondences
    land, so they leave the head-node expectation untouched.
    """
    if d - c_e - f_count - inflight <= 0:
        raise ValueError("no candidate correspondence remains on directed edge")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return alpha * (d - en_v) / (d - c_e - alpha * inflight)


def increment_with_failures_estimate(d: int, en_v: float, c_e: int, f_count: int,
                                     inflight: int, alpha: float) -> float:
    """Closed-form estimate averaging a binomial in-flight failure count.

    Sums the expectation over the full support of B ~ Bin(inflight, 1-alpha).
    Coincides with :func:`increment_with_failures` when ``alpha`` is 0 or 1 or
    when no task is in flight on the edge; deviates otherwise.
    """
    if d - c_e - f_count - inflight <= 0:
        raise ValueError("no candidate correspondence remains on directed edge")
    expect = 0.0
    for j in range(inflight + 1):
        pmf = math.comb(inflight, j) * (1 - alpha) ** j * alpha ** (inflight - j)
        expect += pmf * (f_count + j) / (d - c_e - inflight + j)
    return alpha * (d - en_v) * (1 - expect) / (d - c_e - f_count - inflight)


def increment_batch(d: int, en_v: float, c_e: int, batch_size: int,
                    alpha: float) -> float:
    """Expected-count increase from a batch of tasks on one directed edge.

    Valid when the state holds no prior in-flight task on that directed edge.
    """
    if c_e >= d:
        raise ValueError("edge saturated")
    return alpha * batch_size * (d - en_v) / (d - c_e)


@dataclass(frozen=True)
class PotentialKind:
    """Task-selection potential: greedy, ordinal, or weighted.

    ``lam`` only applies to the weighted kind; ``math.inf`` orders candidates
    by head-node fill first. ``dynamic_norm`` switches the weight normalizer
    from the fixed degree to the current maximum known count over all nodes.
    """

    kind: str = "greedy"          # "greedy" | "ordinal" | "weighted"
    lam: float = 0.0
    dynamic_norm: bool = False

    def __post_init__(self):
        if self.kind not in ("greedy", "ordinal", "weighted"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")


@dataclass
class ExpectationLedger:
    """Per-node expectations plus the per-edge counters the increments need."""

    en: list[float]
    inflight: list[int]            # per directed edge
    c_sizes: list[int]             # per edge
    f_sizes: list[int] = field(default_factory=list)   # per directed edge


def recompute_ledger(state: SolverState, graph: HomotopyGraph,
                     alpha: float) -> ExpectationLedger:
    """Rebuild expectations from the idle state, folding in-flight tasks.

    Tasks are grouped by directed edge and folded one at a time; the result is
    independent of fold order.
    """
    d = graph.degree
    c_sizes = [len(pairs) for pairs in state.correspondences]
    f_sizes = [len(f) for f in state.failures] if state.failures else \
        [0] * graph.n_directed
    inflight = [0] * graph.n_directed
    en = [float(len(q)) for q in state.known]
    by_dedge: dict[int, int] = {}
    for t in state.inflight:
        by_dedge[t.dedge] = by_dedge.get(t.dedge, 0) + 1
    for de in sorted(by_dedge):
        head = graph.head(de)
        for _ in range(by_dedge[de]):
            en[head] += increment_with_failures(
                d, en[head], c_sizes[de >> 1], f_sizes[de], inflight[de], alpha)
            inflight[de] += 1
    return ExpectationLedger(en=en, inflight=inflight, c_sizes=c_sizes,
                             f_sizes=f_sizes)


def potential_of(kind: PotentialKind, candidate: Task, graph: HomotopyGraph,
                 state: SolverState, ledger: ExpectationLedger,
                 node_order: list[int], alpha: float) -> float:
    """Score a schedulable candidate task under the chosen potential.

    Appending one task changes only the head node's expectation, so the greedy
    potential equals the head-node increment.
    """
    de = candidate.dedge
    head = graph.head(de)
    if kind.kind == "ordinal":
        return 1.0 / (node_order.index(head) + 1)
    inc = increment_with_failures(
        graph.degree, ledger.en[head], ledger.c_sizes[de >> 1],
        ledger.f_sizes[de] if ledger.f_sizes else 0, ledger.inflight[de], alpha)
    if kind.kind == "greedy":
        return inc
    q_head = len(state.known[head])
    if math.isinf(kind.lam):
        # lexicographic (fill level, increment) squeezed into one float
        return q_head * (graph.degree + 1.0) + inc
    norm = graph.degree
    if kind.dynamic_norm:
        norm = max(max(len(q) for q in state.known), 1)
    return (q_head / norm) ** kind.lam * inc
