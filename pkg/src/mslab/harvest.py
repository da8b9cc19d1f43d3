"""Desk-scale data collection from a real parametric family.

Monic univariate polynomials F_p(x) = x^d + a_{d-1} x^{d-1} + ... + a_0 with
one parameter point per graph node. Edges are tracked by the segment homotopy
H(t) = (1 - t) g1 F_p1 + t g2 F_p2 with random unit-circle (g1, g2) per edge,
so parallel edges generically induce distinct correspondences. The output is
an oracle datafile in the same format as fabricated data, with measured
microsecond durations and the numeric roots kept in a side table.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from .graph import HomotopyGraph
from .oracle import OracleData
from .roots import eval_dpoly, eval_poly


class TrackingError(RuntimeError):
    """Instance could not be harvested (a node stayed under-populated)."""


class AmbiguityError(RuntimeError):
    """Two known solutions both match one endpoint: tolerances are mis-tuned."""


@dataclass(frozen=True)
class UnivariateFamily:
    """Coefficients (a_0, ..., a_{d-1}) of a monic degree-d polynomial."""

    degree: int
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if self.degree < 1 or len(self.coefficients) != self.degree:
            raise ValueError("coefficient vector must have length degree")

    def __call__(self, x: complex) -> complex:
        return complex(eval_poly(self.coefficients, x))

    def derivative(self, x: complex) -> complex:
        return complex(eval_dpoly(self.coefficients, x))


@dataclass(frozen=True)
class TrackSettings:
    initial_step: float = 0.05
    min_step: float = 1e-7
    shrink_factor: float = 0.5
    grow_factor: float = 1.25
    grow_after: int = 3             # consecutive accepted steps before growing
    corrector_tol: float = 1e-10
    corrector_max_iters: int = 8
    divergence_bound: float = 1e8
    matching_tol: float = 1e-6
    refinement_tol: float = 1e-12

    def __post_init__(self):
        if not self.min_step < self.initial_step:
            raise ValueError("minimum step must be below the initial step")
        for name in ("corrector_tol", "matching_tol", "refinement_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class TrackResult:
    ok: bool
    endpoint: complex | None
    reason: str | None
    duration_us: int


def seed_instance(d: int, node_count: int, multiplicity: int, rng):
    """Random instance with a known exact solution at node 0.

    Returns (families, per-edge (g1, g2) pairs, seed solution). The seed root
    is chosen first and node 0's constant coefficient is solved for it.

    The parameter points are random but structured so the graph's loops carry
    rich monodromy: each node's constant term sits at a jittered angle around
    the origin (the node polygon winds around the branch locus of the dominant
    x^d + c behaviour, as in the cubic triangle example) while the higher
    coefficients are damped by 0.25/sqrt(d). Fully independent coefficient
    vectors make the loop permutations near-identity far too often, leaving
    the solution graph disconnected from the seed.
    """
    if d < 1 or node_count < 2:
        raise ValueError("need degree >= 1 and at least two nodes")

    def cnormal():
        return complex(rng.standard_normal(), rng.standard_normal()) / math.sqrt(2)

    eta = 0.25 / math.sqrt(d)
    thetas = [2 * math.pi * v / node_count
              + (math.pi / (3 * node_count)) * rng.uniform(-1, 1)
              for v in range(node_count)]
    rhos = [0.8 + 0.5 * abs(rng.standard_normal()) for _ in range(node_count)]
    families = []
    x0 = 0j
    for v in range(node_count):
        high = [eta * cnormal() for _ in range(d - 1)]
        if v == 0:
            # seed root chosen so the constant term still lands near the
            # prescribed angular slot
            x0 = rhos[0] ** (1.0 / d) * cmath.exp(1j * (thetas[0] + math.pi) / d)
            a0 = -(x0 ** d + sum(c * x0 ** (i + 1) for i, c in enumerate(high)))
        else:
            a0 = rhos[v] * cmath.exp(1j * thetas[v])
        families.append(UnivariateFamily(d, (a0, *high)))
    n_edges = (node_count * (node_count - 1) // 2) * multiplicity
    # unit gammas with bounded angular spread: wide enough that parallel
    # edges braid differently, narrow enough that the segment arcs keep the
    # polygon's winding
    gammas = []
    for _ in range(n_edges):
        u = 2 * math.pi * rng.random()
        dphi = (math.pi / 2) * rng.uniform(-1, 1)
        gammas.append((cmath.exp(1j * u), cmath.exp(1j * (u + dphi))))
    # one polish pass against node 0 so the seed meets the tracking precondition
    f0 = families[0]
    x0 = x0 - f0(x0) / f0.derivative(x0)
    return families, gammas, x0


def _newton_polish(fam: UnivariateFamily, x: complex, tol: float,
                   max_iters: int = 50) -> complex | None:
    # convergence is judged by the Newton step, which stays well scaled even
    # when |F'| is huge near large-modulus roots of high-degree polynomials
    for _ in range(max_iters):
        dfx = fam.derivative(x)
        if dfx == 0:
            return None
        step = fam(x) / dfx
        x = x - step
        if abs(step) <= tol * (1.0 + abs(x)):
            return x
    return None


def track_path(fam_from: UnivariateFamily, fam_to: UnivariateFamily,
               g1: complex, g2: complex, start: complex,
               settings: TrackSettings = TrackSettings()) -> TrackResult:
    """Continue a root of fam_from to a root of fam_to along the segment homotopy.

    Euler predictor plus Newton corrector with adaptive step control. Returns
    the polished endpoint and the measured duration in whole microseconds;
    failures carry a reason tag.
    """
    t_begin = time.perf_counter_ns()

    def done(ok, endpoint, reason):
        us = max(1, (time.perf_counter_ns() - t_begin) // 1000)
        return TrackResult(ok, endpoint, reason, int(us))

    x = complex(start)
    dfx = fam_from.derivative(x)
    if dfx == 0 or abs(fam_from(x) / dfx) > settings.corrector_tol * (1.0 + abs(x)):
        return done(False, None, "start is not a root of the source polynomial")

    t = 0.0
    dt = settings.initial_step
    accepted = 0
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        h_x = (1.0 - t) * g1 * fam_from.derivative(x) + t * g2 * fam_to.derivative(x)
        h_t = g2 * fam_to(x) - g1 * fam_from(x)
        step_ok = False
        # near path collisions dx/dt blows up; refusing large predicted moves
        # forces tiny steps exactly where sheets could be confused
        if h_x != 0 and abs(dt * h_t / h_x) <= 0.1 * (1.0 + abs(x)):
            predicted = x + dt * (-h_t / h_x)
            x_try = predicted
            t_try = t + dt
            for _ in range(settings.corrector_max_iters):
                hv = (1.0 - t_try) * g1 * fam_from(x_try) + t_try * g2 * fam_to(x_try)
                hd = ((1.0 - t_try) * g1 * fam_from.derivative(x_try)
                      + t_try * g2 * fam_to.derivative(x_try))
                if hd == 0:
                    break
                w = hv / hd
                x_try = x_try - w
                if abs(w) <= settings.corrector_tol * (1.0 + abs(x_try)):
                    step_ok = True
                    break
            # guard against sheet jumps: the corrector must land close to the
            # tangent prediction, else the step is too ambitious
            if step_ok and abs(x_try - predicted) > \
                    0.5 * abs(predicted - x) + settings.corrector_tol:
                step_ok = False
        if step_ok:
            x, t = x_try, t_try
            if abs(x) > settings.divergence_bound:
                return done(False, None, "diverged")
            accepted += 1
            if accepted >= settings.grow_after:
                dt = min(dt * settings.grow_factor, settings.initial_step)
                accepted = 0
        else:
            accepted = 0
            dt *= settings.shrink_factor
            if dt < settings.min_step:
                return done(False, None, "step size underflow")

    polished = _newton_polish(fam_to, x, settings.refinement_tol)
    if polished is None:
        return done(False, None, "endpoint polish failed")
    return done(True, polished, None)


def match_solution(endpoint: complex, known: list[complex], tol: float) -> int:
    """Index of ``endpoint`` in ``known``, registering it if new."""
    scale = max(1.0, abs(endpoint))
    hits = [i for i, r in enumerate(known) if abs(endpoint - r) <= tol * scale]
    if len(hits) > 1:
        raise AmbiguityError(
            f"endpoint matches {len(hits)} known solutions within {tol}")
    if hits:
        return hits[0]
    known.append(endpoint)
    return len(known) - 1


def harvest(d: int, node_count: int, multiplicity: int = 1,
            settings: TrackSettings = TrackSettings(), seed: int = 0) -> OracleData:
    """Track every (start, directed edge) task of a random instance.

    Populates nodes by repeatedly tracking from known solutions in directed
    edge-id order (the sequential solver), which also completes all remaining
    correspondences once every node holds d solutions. Partial permutations
    left by failed or inconsistent tracks are completed arbitrarily; their
    flags stay failed, so the simulator never reads those entries.
    """
    rng = np.random.default_rng([seed & 0xFFFFFFFF, 0x4A57])
    families, gammas, x0 = seed_instance(d, node_count, multiplicity, rng)
    graph = HomotopyGraph.complete(
        node_count, d, multiplicity,
        node_params=tuple(f.coefficients for f in families))

    sols: list[list[complex]] = [[] for _ in range(node_count)]
    sols[0].append(x0)
    # (directed edge, start index) -> (ok, head solution index or None, usecs)
    outcome: dict[tuple[int, int], tuple[bool, int | None, int]] = {}

    progress = True
    while progress:
        progress = False
        for de in range(graph.n_directed):
            tail, head = graph.tail(de), graph.head(de)
            e = de >> 1
            g1, g2 = gammas[e]
            # direction 2e runs low -> high with (g1, g2); the reverse swaps ends
            if de & 1 == 0:
                fam_a, fam_b, ga, gb = families[tail], families[head], g1, g2
            else:
                fam_a, fam_b, ga, gb = families[tail], families[head], g2, g1
            for s in range(len(sols[tail])):
                if (de, s) in outcome:
                    continue
                res = track_path(fam_a, fam_b, ga, gb, sols[tail][s], settings)
                if res.ok:
                    j = match_solution(res.endpoint, sols[head], settings.matching_tol)
                    outcome[(de, s)] = (True, j, res.duration_us)
                else:
                    outcome[(de, s)] = (False, None, res.duration_us)
                progress = True

    for v in range(node_count):
        if len(sols[v]) != d:
            raise TrackingError(
                f"node {v} populated with {len(sols[v])} of {d} solutions")

    permutations: list[list[int]] = []
    flags = [[False] * d for _ in range(graph.n_directed)]
    durations = [[1] * d for _ in range(graph.n_directed)]
    for e in range(graph.n_edges):
        fwd, rev = 2 * e, 2 * e + 1
        sigma = [-1] * d
        used = [False] * d
        for s in range(d):
            ok, j, us = outcome[(fwd, s)]
            durations[fwd][s] = us
            if ok and not used[j]:
                sigma[s] = j
                used[j] = True
                flags[fwd][s] = True
            # a second track landing on a used root is a jump: leave it failed
        for s in range(d):
            ok, i, us = outcome[(rev, s)]
            durations[rev][s] = us
            if not ok:
                continue
            if sigma[i] == s:
                flags[rev][s] = True
            elif sigma[i] == -1 and not used[s]:
                sigma[i] = s
                used[s] = True
                flags[rev][s] = True
            # else: disagrees with the forward direction, demote to failed
        spare = [j for j in range(d) if not used[j]]
        for s in range(d):
            if sigma[s] == -1:
                sigma[s] = spare.pop(0)
        permutations.append(sigma)

    total = graph.n_directed * d
    good = sum(sum(row) for row in flags)
    data = OracleData(
        graph=graph,
        permutations=permutations,
        success_flags=flags,
        durations=durations,
        duration_unit="microseconds",
        provenance={
            "seed": seed,
            "alpha": good / total,
            "duration_model": "measured",
            "source": "harvested",
        },
        solutions=sols,
    )
    data.validate()
    return data
