"""The stage-1 datafile: ground-truth correspondences, outcomes, durations.

Format is versioned JSON with one top-level object. Permutations are stored
once per undirected edge (lower-node index -> higher-node index); success
flags and durations are stored per directed edge, indexed by start solution.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import HomotopyGraph

FORMAT_VERSION = 1


class DatafileError(ValueError):
    """Malformed or incompatible oracle datafile."""


@dataclass
class OracleData:
    graph: HomotopyGraph
    permutations: list[list[int]]        # per edge, length d
    success_flags: list[list[bool]]      # per directed edge, length d
    durations: list[list[int]]           # per directed edge, length d
    duration_unit: str = "ticks"         # "ticks" (fabricated) or "microseconds"
    provenance: dict = field(default_factory=dict)
    solutions: list[list[complex]] | None = None   # harvested coordinates

    def validate(self) -> None:
        g = self.graph
        d = g.degree
        if len(self.permutations) != g.n_edges:
            raise DatafileError("permutation count does not match edge count")
        for e, sigma in enumerate(self.permutations):
            if sorted(sigma) != list(range(d)):
                raise DatafileError(f"malformed permutation on edge {e}: not a bijection")
        if len(self.success_flags) != g.n_directed or len(self.durations) != g.n_directed:
            raise DatafileError("missing direction flags or durations")
        for de in range(g.n_directed):
            if len(self.success_flags[de]) != d:
                raise DatafileError(f"flag array on directed edge {de} has wrong length")
            if len(self.durations[de]) != d:
                raise DatafileError(f"duration array on directed edge {de} has wrong length")
            if any(t <= 0 for t in self.durations[de]):
                raise DatafileError(f"non-positive duration on directed edge {de}")
        if self.duration_unit not in ("ticks", "microseconds"):
            raise DatafileError(f"unknown duration unit {self.duration_unit!r}")

    def image(self, dedge: int, start: int) -> int:
        """Ground-truth target index of a track from ``start`` along ``dedge``."""
        sigma = self.permutations[dedge >> 1]
        if dedge & 1 == 0:
            return sigma[start]
        return sigma.index(start)

    def alpha(self) -> float:
        """Model success rate recorded in provenance (1.0 if absent)."""
        return float(self.provenance.get("alpha", 1.0))


def _graph_to_json(g: HomotopyGraph) -> dict:
    out: dict = {"N": g.node_count, "d": g.degree}
    m = g.multiplicity()
    if m is not None:
        out["m"] = m
    else:
        out["edges"] = [list(e) for e in g.edges]
    if g.node_params is not None:
        out["node_params"] = [
            [[z.real, z.imag] for z in params] for params in g.node_params
        ]
    return out


def _graph_from_json(obj: dict) -> HomotopyGraph:
    params = None
    if obj.get("node_params") is not None:
        params = tuple(
            tuple(complex(re, im) for re, im in node) for node in obj["node_params"]
        )
    if "edges" in obj:
        return HomotopyGraph(obj["N"], obj["d"], tuple(tuple(e) for e in obj["edges"]),
                             params)
    return HomotopyGraph.complete(obj["N"], obj["d"], obj["m"], params)


def save_oracle(data: OracleData, destination) -> None:
    """Write the datafile; ``destination`` is a path or a writable text file."""
    data.validate()
    doc = {
        "version": FORMAT_VERSION,
        "graph": _graph_to_json(data.graph),
        "permutations": {str(e): sigma for e, sigma in enumerate(data.permutations)},
        "success_flags": {
            str(de): [int(b) for b in flags]
            for de, flags in enumerate(data.success_flags)
        },
        "durations": {str(de): list(map(int, durs)) for de, durs in enumerate(data.durations)},
        "duration_unit": data.duration_unit,
        "provenance": data.provenance,
    }
    if data.solutions is not None:
        doc["solutions"] = {
            str(v): [[z.real, z.imag] for z in sols]
            for v, sols in enumerate(data.solutions)
        }
    if hasattr(destination, "write"):
        json.dump(doc, destination, indent=1)
    else:
        with open(destination, "w") as fh:
            json.dump(doc, fh, indent=1)


def load_oracle(source) -> OracleData:
    """Parse a datafile; raises :class:`DatafileError` on schema problems."""
    if hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict) or "version" not in doc:
        raise DatafileError("not an oracle datafile")
    if doc["version"] != FORMAT_VERSION:
        raise DatafileError(
            f"version mismatch: file has {doc['version']}, expected {FORMAT_VERSION}")
    try:
        graph = _graph_from_json(doc["graph"])
        n_edges, n_directed = graph.n_edges, graph.n_directed
        perms = [list(map(int, doc["permutations"][str(e)])) for e in range(n_edges)]
        flags = []
        durs = []
        for de in range(n_directed):
            key = str(de)
            if key not in doc["success_flags"]:
                raise DatafileError(f"missing direction flags for directed edge {de}")
            flags.append([bool(b) for b in doc["success_flags"][key]])
            durs.append(list(map(int, doc["durations"][key])))
    except (KeyError, TypeError) as exc:
        raise DatafileError(f"incomplete datafile: {exc}") from exc
    solutions = None
    if "solutions" in doc:
        solutions = [
            [complex(re, im) for re, im in doc["solutions"][str(v)]]
            for v in range(graph.node_count)
        ]
    data = OracleData(
        graph=graph,
        permutations=perms,
        success_flags=flags,
        durations=durs,
        duration_unit=doc.get("duration_unit", "ticks"),
        provenance=doc.get("provenance", {}),
        solutions=solutions,
    )
    data.validate()
    return data
