"""Stage-1 generator of fabricated oracle data.

Every edge gets its own counter-derived RNG stream, so fabrication is
order-independent and deterministic given the seed. Durations follow the
trials-until-n-successes negative binomial (support starts at ``nb_successes``,
mean ``nb_successes / nb_success_prob``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import HomotopyGraph
from .oracle import OracleData

# stream tags keep purpose-specific RNG streams disjoint under one seed
_EDGE_STREAM = 0xED6E


@dataclass(frozen=True)
class FabricationConfig:
    nodes: int
    degree: int
    multiplicity: int = 1
    alpha: float = 1.0
    nb_successes: int = 10
    nb_success_prob: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.nb_successes < 1:
            raise ValueError("nb_successes must be >= 1")
        if not 0.0 < self.nb_success_prob <= 1.0:
            raise ValueError("nb_success_prob must lie in (0, 1]")


def edge_rng(seed: int, edge_id: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, _EDGE_STREAM, edge_id])


def sample_duration(rng: np.random.Generator, n: int = 10, p: float = 0.3) -> int:
    """Ticks for one fake path track: Bernoulli(p) trials until n successes."""
    return int(n + rng.negative_binomial(n, p))


def fabricate(config: FabricationConfig) -> OracleData:
    """Draw uniform correspondences plus independent per-direction outcomes."""
    graph = HomotopyGraph.complete(config.nodes, config.degree, config.multiplicity)
    d = config.degree
    perms: list[list[int]] = []
    flags: list[list[bool]] = []
    durs: list[list[int]] = []
    for e in range(graph.n_edges):
        rng = edge_rng(config.seed, e)
        perms.append(rng.permutation(d).tolist())
        for _direction in range(2):
            flags.append((rng.random(d) < config.alpha).tolist())
            durs.append(
                (config.nb_successes
                 + rng.negative_binomial(config.nb_successes, config.nb_success_prob,
                                         size=d)).tolist())
    return OracleData(
        graph=graph,
        permutations=perms,
        success_flags=flags,
        durations=durs,
        duration_unit="ticks",
        provenance={
            "seed": int(config.seed),
            "alpha": config.alpha,
            "duration_model": f"negative-binomial trials (n={config.nb_successes}, "
                              f"p={config.nb_success_prob})",
            "source": "fabricated",
        },
    )
