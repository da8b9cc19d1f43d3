"""Homotopy graph topology and the combinatorial solver state.

Solutions are referenced by integer index per node; numeric coordinates (for
harvested instances) live in a side table on :class:`~mslab.oracle.OracleData`.
Each undirected edge ``e`` owns two directed-edge ids: ``2*e`` runs from the
lower-numbered node to the higher one, ``2*e + 1`` the other way.
"""
from __future__ import annotations

from dataclasses import dataclass, field


def reverse(dedge: int) -> int:
    """Opposite direction of a directed edge; an involution."""
    return dedge ^ 1


@dataclass(frozen=True)
class HomotopyGraph:
    """Loopless multigraph of parameter points.

    ``edges`` lists unordered pairs ``(v, w)`` with ``v < w``; parallel edges
    are repeated entries. ``degree`` is the solution count per node.
    """

    node_count: int
    degree: int
    edges: tuple[tuple[int, int], ...]
    node_params: tuple[tuple[complex, ...], ...] | None = None

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("need at least 2 nodes")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        for v, w in self.edges:
            if v == w:
                raise ValueError(f"loop edge at node {v}")
            if not (0 <= v < w < self.node_count):
                raise ValueError(f"bad edge ({v}, {w})")

    @classmethod
    def complete(cls, node_count: int, degree: int, multiplicity: int,
                 node_params=None) -> "HomotopyGraph":
        """Complete graph with ``multiplicity`` parallel edges per node pair."""
        if multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        edges = []
        for v in range(node_count):
            for w in range(v + 1, node_count):
                edges.extend([(v, w)] * multiplicity)
        return cls(node_count, degree, tuple(edges), node_params)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_directed(self) -> int:
        return 2 * len(self.edges)

    def tail(self, dedge: int) -> int:
        v, w = self.edges[dedge >> 1]
        return v if dedge & 1 == 0 else w

    def head(self, dedge: int) -> int:
        v, w = self.edges[dedge >> 1]
        return w if dedge & 1 == 0 else v

    def out_dedges(self, node: int) -> list[int]:
        return [de for de in range(self.n_directed) if self.tail(de) == node]

    def multiplicity(self) -> int | None:
        """Parallel-edge count if this is a complete-graph configuration."""
        n, counts = self.node_count, {}
        for pair in self.edges:
            counts[pair] = counts.get(pair, 0) + 1
        if len(counts) != n * (n - 1) // 2:
            return None
        ms = set(counts.values())
        return ms.pop() if len(ms) == 1 else None


@dataclass(frozen=True)
class Task:
    """One candidate homotopy path track: start solution along a directed edge."""

    start: int
    dedge: int
    scheduled_at: int = 0
    duration: int = 1


@dataclass
class SolverState:
    """Known solutions, known correspondences, in-flight tasks, known failures.

    ``known[v]`` is the set of known solution indices at node ``v``;
    ``correspondences[e]`` the partial bijection on edge ``e`` as pairs
    ``(index at lower node, index at higher node)``; ``failures[de]`` the start
    indices whose track failed on directed edge ``de``.
    """

    known: list[set[int]]
    correspondences: list[set[tuple[int, int]]]
    inflight: list[Task] = field(default_factory=list)
    failures: list[set[int]] = field(default_factory=list)

    @classmethod
    def initial(cls, graph: HomotopyGraph, seed_node: int, seed_solution: int) -> "SolverState":
        known = [set() for _ in range(graph.node_count)]
        known[seed_node].add(seed_solution)
        return cls(
            known=known,
            correspondences=[set() for _ in range(graph.n_edges)],
            inflight=[],
            failures=[set() for _ in range(graph.n_directed)],
        )

    def tail_indices(self, graph: HomotopyGraph, dedge: int) -> set[int]:
        """Start-side projection of the correspondence along ``dedge``."""
        side = 0 if dedge & 1 == 0 else 1
        return {pair[side] for pair in self.correspondences[dedge >> 1]}


def validate_state(state: SolverState, graph: HomotopyGraph) -> list[str]:
    """Check every state invariant; returns human-readable violations."""
    bad = []
    d = graph.degree
    for v, q in enumerate(state.known):
        if len(q) > d:
            bad.append(f"node {v}: |Q| = {len(q)} exceeds degree {d}")
    for e, pairs in enumerate(state.correspondences):
        lo, hi = graph.edges[e]
        left = [p[0] for p in pairs]
        right = [p[1] for p in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            bad.append(f"edge {e}: correspondence is not a partial bijection")
        if len(pairs) > d:
            bad.append(f"edge {e}: |C| = {len(pairs)} exceeds degree {d}")
        for i, j in pairs:
            if i not in state.known[lo] or j not in state.known[hi]:
                bad.append(f"edge {e}: pair ({i}, {j}) has an unknown endpoint")
    for de, fails in enumerate(state.failures):
        tail = graph.tail(de)
        tracked = state.tail_indices(graph, de)
        for s in fails:
            if s not in state.known[tail]:
                bad.append(f"dedge {de}: failure without known start {s}")
            if s in tracked:
                bad.append(f"dedge {de}: start {s} both failed and corresponded")
    seen = set()
    for t in state.inflight:
        tail = graph.tail(t.dedge)
        if t.start not in state.known[tail]:
            bad.append(f"in-flight ({t.start}, {t.dedge}): start not in Q_tail")
        if t.start in state.tail_indices(graph, t.dedge):
            bad.append(f"in-flight ({t.start}, {t.dedge}): duplicates a correspondence")
        if t.start in state.failures[t.dedge]:
            bad.append(f"in-flight ({t.start}, {t.dedge}): duplicates a failure")
        if (t.start, t.dedge) in seen:
            bad.append(f"in-flight ({t.start}, {t.dedge}): scheduled twice")
        seen.add((t.start, t.dedge))
    return bad
