"""Experiment drivers: efficiency tables, thresholds, sweeps, bound curves.

Every driver is a deterministic function of its seed: per-trial oracle seeds
are derived from (seed, purpose tag, indices), and CSV rows carry the seed
that regenerates them. Trials can fan out over a process pool sized by the
``MSLAB_POOL_SIZE`` environment variable (default: in-process, sequential).
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .fabricate import FabricationConfig, fabricate
from .potential import PotentialKind
from .simulate import RunMetrics, SimulationConfig, compute_metrics, pack_oracle, run

_SEED_MASK = 0xFFFFFFFF

# purpose tags for derived seed streams
_TAG_EFFICIENCY = 0xEF1C
_TAG_THRESHOLD = 0x7452
_TAG_TRACKS = 0x7AC5
_TAG_LAMBDA = 0x1A3B
_TAG_SANDWICH = 0x5A4D


def derive_seed(*parts: int) -> int:
    """Collapse (seed, tag, indices...) into one 32-bit oracle seed."""
    rng = np.random.default_rng([p & _SEED_MASK for p in parts])
    return int(rng.integers(0, 2 ** 32))


@dataclass(frozen=True)
class SweepSpec:
    """Parameters of one Monte-Carlo sweep over the success rate."""

    alphas: tuple[float, ...]
    trials: int
    nodes: int = 3
    degree: int = 100
    multiplicity: int = 1
    threads: int = 1
    potential: PotentialKind = field(default_factory=PotentialKind)
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ValueError("alpha grid must lie in [0, 1]")


def _pool_size() -> int:
    raw = os.environ.get("MSLAB_POOL_SIZE", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items):
    """Order-preserving map, optionally over a process pool."""
    items = list(items)
    workers = _pool_size()
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _run_once(args):
    (nodes, degree, multiplicity, alpha, oracle_seed, threads,
     pot_kind, lam, dyn) = args
    oracle = fabricate(FabricationConfig(
        nodes=nodes, degree=degree, multiplicity=multiplicity,
        alpha=alpha, seed=oracle_seed))
    cfg = SimulationConfig(threads=threads,
                           potential=PotentialKind(pot_kind, lam, dyn))
    metrics, _ = run(oracle, cfg)
    return metrics


def _metrics(nodes, degree, multiplicity, alpha, oracle_seed, threads,
             potential: PotentialKind) -> RunMetrics:
    return _run_once((nodes, degree, multiplicity, alpha, oracle_seed,
                      threads, potential.kind, potential.lam,
                      potential.dynamic_norm))


# ---------------------------------------------------------------------------
# efficiency


def _efficiency_trial(args):
    nodes, d, m, threads_list, oracle_seed, pot = args
    oracle = fabricate(FabricationConfig(
        nodes=nodes, degree=d, multiplicity=m, alpha=1.0, seed=oracle_seed))
    packed = pack_oracle(oracle)
    kind = PotentialKind(pot[0], pot[1], pot[2])
    base, _ = run(packed, SimulationConfig(threads=1, potential=kind))
    out = []
    for p in threads_list:
        if p == 1:
            par = base
        else:
            par, _ = run(packed, SimulationConfig(threads=p, potential=kind))
        speedup, eff, idle = compute_metrics(base, par, p)
        out.append({"threads": p, "speedup": speedup, "efficiency": eff,
                    "idle_fraction": idle, "tracks": par.tracks,
                    "wall_time": par.wall_time, "status": par.status})
    return out


def efficiency_table(degrees, threads_list, trials: int,
                     potential: PotentialKind = PotentialKind(),
                     seed: int = 0, nodes: int = 5,
                     multiplicity: int = 1) -> list[dict]:
    """Mean parallel efficiency per (degree, thread count) cell.

    Each trial fabricates one oracle (complete graph, alpha=1) and shares it
    between the single-thread baseline and every thread count, so cells
    differ only in scheduling.
    """
    pot = (potential.kind, potential.lam, potential.dynamic_norm)
    jobs = []
    for d in degrees:
        for t in range(trials):
            oseed = derive_seed(seed, _TAG_EFFICIENCY, d, t)
            jobs.append((nodes, d, multiplicity, list(threads_list), oseed, pot))
    per_trial = _map(_efficiency_trial, jobs)
    rows = []
    idx = 0
    for d in degrees:
        cells = per_trial[idx:idx + trials]
        idx += trials
        for j, p in enumerate(threads_list):
            effs = [c[j]["efficiency"] for c in cells]
            speedups = [c[j]["speedup"] for c in cells]
            idles = [c[j]["idle_fraction"] for c in cells]
            rows.append({
                "N": nodes, "d": d, "m": multiplicity, "threads": p,
                "trials": trials, "seed": seed,
                "efficiency": sum(effs) / trials,
                "speedup": sum(speedups) / trials,
                "idle_fraction": sum(idles) / trials,
            })
    return rows


# ---------------------------------------------------------------------------
# threshold


@dataclass
class ThresholdResult:
    alpha_star: float
    history: list[tuple[float, int, int]]    # (alpha, successes, trials)
    degenerate: str | None = None            # set when the bracket collapses


def _success_rate(nodes, d, m, k, potential: PotentialKind, trials,
                  alpha, seed, probe_index) -> tuple[int, int]:
    jobs = [(nodes, d, m, alpha,
             derive_seed(seed, _TAG_THRESHOLD, probe_index, t), k,
             potential.kind, potential.lam, potential.dynamic_norm)
            for t in range(trials)]
    results = _map(_run_once, jobs)
    return sum(1 for r in results if r.status == "saturated"), trials


def threshold_estimate(nodes: int, d: int, m: int, k: int = 1,
                       potential: PotentialKind = PotentialKind(),
                       trials: int = 40, tolerance: float = 0.005,
                       seed: int = 0) -> ThresholdResult:
    """Bisect the success rate alpha at which half of all runs saturate."""
    history: list[tuple[float, int, int]] = []
    probe_index = 0

    def probe(alpha):
        nonlocal probe_index
        s, t = _success_rate(nodes, d, m, k, potential, trials, alpha,
                             seed, probe_index)
        probe_index += 1
        history.append((alpha, s, t))
        return s / t

    if probe(1.0) < 0.5:
        return ThresholdResult(1.0, history,
                               degenerate="success rate below 50% at alpha=1")
    if probe(0.0) >= 0.5:
        return ThresholdResult(0.0, history,
                               degenerate="success rate at least 50% at alpha=0")
    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if probe(mid) >= 0.5:
            hi = mid
        else:
            lo = mid
    return ThresholdResult((lo + hi) / 2, history)


# ---------------------------------------------------------------------------
# tracks vs alpha


def tracks_vs_alpha_sweep(d: int, multiplicities, alphas, trials: int,
                          nodes: int = 3,
                          potential: PotentialKind = PotentialKind(),
                          threads: int = 1, seed: int = 0) -> list[dict]:
    """Total tracks per run across an alpha grid, one row per trial.

    Rows carry the caption window markers 1/(3m) and log10(d)/m so plots can
    recompute them from data alone.
    """
    rows = []
    for m in multiplicities:
        jobs = []
        for alpha in alphas:
            for t in range(trials):
                oseed = derive_seed(seed, _TAG_TRACKS, m, round(alpha * 10 ** 6), t)
                jobs.append((nodes, d, m, alpha, oseed, threads,
                             potential.kind, potential.lam,
                             potential.dynamic_norm))
        results = _map(_run_once, jobs)
        i = 0
        for alpha in alphas:
            for t in range(trials):
                r = results[i]
                i += 1
                rows.append({
                    "N": nodes, "d": d, "m": m, "alpha": alpha, "trial": t,
                    "seed": jobs[i - 1][4], "tracks": r.tracks,
                    "successes": r.successes, "failures": r.failures,
                    "status": r.status,
                    "marker_lo": 1.0 / (3.0 * m),
                    "marker_hi": math.log10(d) / m,
                })
    return rows


# ---------------------------------------------------------------------------
# bound curves and the sandwich experiment


def bound_curves(nodes: int, d: int, m: int, alphas) -> list[dict]:
    """Theoretical bounds enclosing the probability that a run saturates.

    upper(a) = 1 - (1 - (a N m)^d)^N where a N m < 1 (vacuously 1 beyond);
    lower(a) = (1 - exp(-a m))^(N d). Both clamped to [0, 1].
    """
    out = []
    for a in alphas:
        x = a * nodes * m
        if x < 1.0:
            upper = 1.0 - (1.0 - x ** d) ** nodes
        else:
            upper = 1.0
        lower = (1.0 - math.exp(-a * m)) ** (nodes * d)
        out.append({"alpha": a, "lower": min(max(lower, 0.0), 1.0),
                    "upper": min(max(upper, 0.0), 1.0)})
    return out


def success_frequency(nodes: int, d: int, m: int, alphas, trials: int,
                      potential: PotentialKind = PotentialKind(),
                      threads: int = 1, seed: int = 0) -> list[dict]:
    """Empirical saturation frequency on an alpha grid, with bound columns."""
    curves = {c["alpha"]: c for c in bound_curves(nodes, d, m, alphas)}
    rows = []
    for alpha in alphas:
        jobs = [(nodes, d, m, alpha,
                 derive_seed(seed, _TAG_SANDWICH, d, m, round(alpha * 10 ** 6), t),
                 threads, potential.kind, potential.lam, potential.dynamic_norm)
                for t in range(trials)]
        results = _map(_run_once, jobs)
        succ = sum(1 for r in results if r.status == "saturated")
        freq = succ / trials
        sigma = math.sqrt(max(freq * (1.0 - freq), 1.0 / trials) / trials)
        rows.append({
            "N": nodes, "d": d, "m": m, "alpha": alpha, "trials": trials,
            "seed": seed, "successes": succ, "frequency": freq,
            "sigma": sigma, "lower": curves[alpha]["lower"],
            "upper": curves[alpha]["upper"],
        })
    return rows


# ---------------------------------------------------------------------------
# lambda comparison


def lambda_comparison(nodes: int, d: int, lambdas, trials: int,
                      threads: int = 1, multiplicity: int = 1,
                      alpha: float = 1.0, seed: int = 0) -> list[dict]:
    """Weight-potential runs across a lambda list, one row per (lambda, trial).

    Trials share oracle seeds across lambda values so columns are paired.
    """
    rows = []
    for lam in lambdas:
        if lam == 0:
            kind = PotentialKind("greedy")
        else:
            kind = PotentialKind("weighted", lam=float(lam))
        jobs = [(nodes, d, multiplicity, alpha,
                 derive_seed(seed, _TAG_LAMBDA, t), threads,
                 kind.kind, kind.lam, kind.dynamic_norm)
                for t in range(trials)]
        results = _map(_run_once, jobs)
        for t, r in enumerate(results):
            rows.append({
                "N": nodes, "d": d, "m": multiplicity, "alpha": alpha,
                "threads": threads, "lambda": lam, "trial": t,
                "seed": jobs[t][4], "tracks": r.tracks,
                "wall_time": r.wall_time, "status": r.status,
            })
    return rows


# ---------------------------------------------------------------------------
# CSV output


def write_csv(path, rows: list[dict]) -> None:
    if not rows:
        raise ValueError("no rows to write")
    columns = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def write_provenance(path, **metadata) -> None:
    """Sidecar describing how a CSV was produced (no wall-clock content)."""
    clean = {}
    for key, value in metadata.items():
        if isinstance(value, PotentialKind):
            value = asdict(value)
        clean[key] = value
    with open(path, "w") as fh:
        json.dump(clean, fh, indent=1, default=str)
        fh.write("\n")
