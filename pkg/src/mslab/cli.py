"""Command line entry point.

Subcommands: fabricate, harvest, simulate, sweep. All randomness flows from
the --seed flag (default 0, never wall-clock), so bare invocations are
reproducible. Exit codes: 0 success, 2 usage, 3 I/O, 4 validation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import experiments
from .fabricate import FabricationConfig, fabricate
from .harvest import TrackSettings, TrackingError, harvest
from .oracle import DatafileError, load_oracle, save_oracle
from .potential import PotentialKind
from .simulate import SimulationConfig, run

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4

DEFAULT_SEED = 0


def _parse_potential(name: str, lam: float) -> PotentialKind:
    if name == "E":
        return PotentialKind("greedy")
    if name == "ord":
        return PotentialKind("ordinal")
    if name == "omega":
        return PotentialKind("weighted", lam=lam)
    raise ValueError(f"unknown potential {name!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mslab",
        description="Deterministic lab for potential-driven parallel "
                    "monodromy solving.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fabricate", help="generate a synthetic oracle datafile")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--multiplicity", type=int, default=1)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)

    p = sub.add_parser("harvest",
                       help="track a real univariate instance into a datafile")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--multiplicity", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--min-step", type=float, default=None,
                   help="override the minimum continuation step size")

    p = sub.add_parser("simulate", help="replay a datafile through the scheduler")
    p.add_argument("--oracle", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--potential", choices=["E", "ord", "omega"], default="E")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="weight exponent for the omega potential (inf allowed)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=None,
                   help="track budget (default 100*N*d)")
    p.add_argument("--metrics-out", default=None,
                   help="append-style CSV destination for the run metrics")

    p = sub.add_parser("sweep", help="run an experiment batch from a config file")
    p.add_argument("kind", choices=["efficiency", "threshold", "tracks",
                                    "lambda", "bounds"])
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _cmd_fabricate(args) -> int:
    oracle = fabricate(FabricationConfig(
        nodes=args.nodes, degree=args.degree, multiplicity=args.multiplicity,
        alpha=args.alpha, seed=args.seed))
    save_oracle(oracle, args.out)
    print(f"wrote {args.out}: N={args.nodes} d={args.degree} "
          f"m={args.multiplicity} alpha={args.alpha} seed={args.seed}")
    return EXIT_OK


def _cmd_harvest(args) -> int:
    settings = TrackSettings()
    if args.min_step is not None:
        settings = TrackSettings(min_step=args.min_step)
    oracle = harvest(args.degree, args.nodes, args.multiplicity,
                     settings=settings, seed=args.seed)
    save_oracle(oracle, args.out)
    print(f"wrote {args.out}: N={args.nodes} d={args.degree} "
          f"m={args.multiplicity} seed={args.seed} "
          f"alpha={oracle.provenance['alpha']:.4f}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    oracle = load_oracle(args.oracle)
    potential = _parse_potential(args.potential, args.lam)
    config = SimulationConfig(threads=args.threads, potential=potential,
                              track_budget=args.budget, tie_seed=args.seed)
    metrics, _ = run(oracle, config)
    g = oracle.graph
    m = g.multiplicity()
    lam_repr = "" if potential.kind != "weighted" else (
        "inf" if math.isinf(potential.lam) else repr(potential.lam))
    row = {
        "run_id": args.seed,
        "N": g.node_count,
        "d": g.degree,
        "m": m if m is not None else "",
        "alpha": oracle.alpha(),
        "threads": args.threads,
        "potential": args.potential,
        "lambda": lam_repr,
        "wall_time": metrics.wall_time,
        "tracks": metrics.tracks,
        "successes": metrics.successes,
        "failures": metrics.failures,
        "status": metrics.status,
        "idle_fraction": metrics.idle_fraction,
    }
    print(" ".join(f"{k}={v}" for k, v in row.items()))
    if args.metrics_out:
        experiments.write_csv(args.metrics_out, [row])
    return EXIT_OK


def _load_config(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("sweep config must be a JSON object")
    return doc


def _config_potential(cfg: dict) -> PotentialKind:
    return _parse_potential(cfg.get("potential", "E"),
                            float(cfg.get("lambda", 1.0)))


def _cmd_sweep(args) -> int:
    import os

    cfg = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    seed = int(cfg.get("seed", DEFAULT_SEED))
    out_csv = os.path.join(args.out, f"{args.kind}.csv")

    if args.kind == "efficiency":
        rows = experiments.efficiency_table(
            cfg["degrees"], cfg["threads"], int(cfg["trials"]),
            potential=_config_potential(cfg), seed=seed,
            nodes=int(cfg.get("nodes", 5)),
            multiplicity=int(cfg.get("multiplicity", 1)))
    elif args.kind == "threshold":
        rows = []
        for cell in cfg["cells"]:
            res = experiments.threshold_estimate(
                int(cell["N"]), int(cell["d"]), int(cell.get("m", 1)),
                k=int(cfg.get("threads", 1)),
                potential=_config_potential(cfg),
                trials=int(cfg.get("trials", 40)),
                tolerance=float(cfg.get("tolerance", 0.005)),
                seed=seed)
            rows.append({
                "N": cell["N"], "d": cell["d"], "m": cell.get("m", 1),
                "threads": cfg.get("threads", 1),
                "trials": cfg.get("trials", 40),
                "tolerance": cfg.get("tolerance", 0.005), "seed": seed,
                "alpha_star": res.alpha_star,
                "probes": len(res.history),
                "degenerate": res.degenerate or "",
            })
    elif args.kind == "tracks":
        rows = experiments.tracks_vs_alpha_sweep(
            int(cfg["d"]), cfg["multiplicities"], cfg["alphas"],
            int(cfg["trials"]), nodes=int(cfg.get("nodes", 3)),
            potential=_config_potential(cfg),
            threads=int(cfg.get("threads", 1)), seed=seed)
    elif args.kind == "lambda":
        rows = experiments.lambda_comparison(
            int(cfg.get("nodes", 5)), int(cfg["d"]), cfg["lambdas"],
            int(cfg["trials"]), threads=int(cfg.get("threads", 1)),
            multiplicity=int(cfg.get("multiplicity", 1)),
            alpha=float(cfg.get("alpha", 1.0)), seed=seed)
    else:  # bounds
        nodes, d, m = int(cfg.get("nodes", 3)), int(cfg["d"]), int(cfg.get("m", 1))
        if cfg.get("trials"):
            rows = experiments.success_frequency(
                nodes, d, m, cfg["alphas"], int(cfg["trials"]),
                potential=_config_potential(cfg),
                threads=int(cfg.get("threads", 1)), seed=seed)
        else:
            rows = [dict(N=nodes, d=d, m=m, **c)
                    for c in experiments.bound_curves(nodes, d, m, cfg["alphas"])]

    experiments.write_csv(out_csv, rows)
    experiments.write_provenance(
        os.path.join(args.out, f"{args.kind}.provenance.json"),
        kind=args.kind, config=cfg, seed=seed, rows=len(rows))
    print(f"wrote {out_csv} ({len(rows)} rows)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handlers = {
        "fabricate": _cmd_fabricate,
        "harvest": _cmd_harvest,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DatafileError, TrackingError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
