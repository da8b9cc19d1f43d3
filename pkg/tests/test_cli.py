import csv
import json

import pytest

from mslab import cli
from mslab.fabricate import FabricationConfig, fabricate
from mslab.oracle import load_oracle
from mslab.simulate import SimulationConfig, run


def test_fabricate_then_simulate_pipeline(tmp_path, capsys):
    oracle_path = tmp_path / "oracle.json"
    code = cli.main(["fabricate", "--nodes", "3", "--degree", "16",
                     "--multiplicity", "2", "--alpha", "0.8",
                     "--seed", "5", "--out", str(oracle_path)])
    assert code == 0
    assert "d=16" in capsys.readouterr().out
    metrics_path = tmp_path / "metrics.csv"
    code = cli.main(["simulate", "--oracle", str(oracle_path),
                     "--threads", "4", "--potential", "E",
                     "--metrics-out", str(metrics_path)])
    assert code == 0
    line = capsys.readouterr().out.strip()
    fields = dict(part.split("=", 1) for part in line.split())
    assert fields["N"] == "3" and fields["d"] == "16" and fields["m"] == "2"
    assert fields["threads"] == "4"
    assert fields["status"] in ("saturated", "exhausted", "budget-exceeded")
    with open(metrics_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert rows[0]["status"] == fields["status"]
    assert rows[0]["tracks"] == fields["tracks"]


def test_cli_simulate_matches_library(tmp_path, capsys):
    oracle_path = tmp_path / "o.json"
    cli.main(["fabricate", "--nodes", "4", "--degree", "12", "--alpha", "0.9",
              "--seed", "3", "--out", str(oracle_path)])
    capsys.readouterr()
    cli.main(["simulate", "--oracle", str(oracle_path), "--threads", "2",
              "--potential", "omega", "--lambda", "4"])
    line = capsys.readouterr().out.strip()
    fields = dict(part.split("=", 1) for part in line.split())

    from mslab.potential import PotentialKind
    oracle = load_oracle(oracle_path)
    metrics, _ = run(oracle, SimulationConfig(
        threads=2, potential=PotentialKind("weighted", 4.0)))
    assert int(fields["wall_time"]) == metrics.wall_time
    assert int(fields["tracks"]) == metrics.tracks
    assert fields["status"] == metrics.status
    assert fields["lambda"] == "4.0"


def test_simulate_with_infinite_lambda(tmp_path, capsys):
    oracle_path = tmp_path / "o.json"
    cli.main(["fabricate", "--nodes", "3", "--degree", "8",
              "--out", str(oracle_path)])
    code = cli.main(["simulate", "--oracle", str(oracle_path),
                     "--potential", "omega", "--lambda", "inf"])
    assert code == 0
    assert "lambda=inf" in capsys.readouterr().out


def test_harvest_subcommand(tmp_path, capsys):
    out = tmp_path / "h.json"
    code = cli.main(["harvest", "--degree", "4", "--nodes", "3",
                     "--multiplicity", "2", "--seed", "1", "--out", str(out)])
    assert code == 0
    assert "alpha=" in capsys.readouterr().out
    oracle = load_oracle(out)
    assert oracle.provenance["source"] == "harvested"
    assert oracle.solutions is not None


def test_usage_errors_exit_2(capsys):
    assert cli.main([]) == 2
    assert cli.main(["simulate"]) == 2                      # missing --oracle
    assert cli.main(["sweep", "bogus-kind", "--config", "x",
                     "--out", "y"]) == 2
    capsys.readouterr()


def test_missing_file_exits_3(tmp_path, capsys):
    code = cli.main(["simulate", "--oracle", str(tmp_path / "absent.json")])
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_invalid_datafile_exits_4(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"something": "else"}))
    assert cli.main(["simulate", "--oracle", str(bad)]) == 4
    assert "error:" in capsys.readouterr().err
    # structurally broken sweep config
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps([1, 2, 3]))
    assert cli.main(["sweep", "tracks", "--config", str(cfg),
                     "--out", str(tmp_path / "out")]) == 4
    # config missing a required key
    cfg.write_text(json.dumps({"trials": 2}))
    assert cli.main(["sweep", "tracks", "--config", str(cfg),
                     "--out", str(tmp_path / "out")]) == 4
    capsys.readouterr()


def test_sweep_tracks_writes_csv_and_provenance(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "d": 50, "multiplicities": [2], "alphas": [0.6, 1.0],
        "trials": 2, "seed": 9,
    }))
    out_dir = tmp_path / "out"
    code = cli.main(["sweep", "tracks", "--config", str(cfg),
                     "--out", str(out_dir)])
    assert code == 0
    csv_path = out_dir / "tracks.csv"
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert {"marker_lo", "marker_hi", "tracks"} <= set(rows[0])
    prov = json.loads((out_dir / "tracks.provenance.json").read_text())
    assert prov["kind"] == "tracks" and prov["seed"] == 9
    assert prov["rows"] == 4
    capsys.readouterr()


def test_sweep_bounds_without_trials(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 8, "m": 2, "alphas": [0.1, 0.5]}))
    out_dir = tmp_path / "bounds"
    assert cli.main(["sweep", "bounds", "--config", str(cfg),
                     "--out", str(out_dir)]) == 0
    with open(out_dir / "bounds.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["alpha"] for r in rows] == ["0.1", "0.5"]
    assert {"lower", "upper"} <= set(rows[0])
    capsys.readouterr()


def test_sweep_threshold_cells(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "cells": [{"N": 3, "d": 4, "m": 2}],
        "trials": 6, "tolerance": 0.2, "seed": 2,
    }))
    out_dir = tmp_path / "thr"
    assert cli.main(["sweep", "threshold", "--config", str(cfg),
                     "--out", str(out_dir)]) == 0
    with open(out_dir / "threshold.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert 0.0 <= float(rows[0]["alpha_star"]) <= 1.0
    capsys.readouterr()


def test_sweep_reruns_are_byte_identical(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "d": 30, "multiplicities": [2], "alphas": [0.9],
        "trials": 3, "seed": 4,
    }))
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["sweep", "tracks", "--config", str(cfg),
                     "--out", str(out_a)]) == 0
    assert cli.main(["sweep", "tracks", "--config", str(cfg),
                     "--out", str(out_b)]) == 0
    assert (out_a / "tracks.csv").read_bytes() == \
        (out_b / "tracks.csv").read_bytes()
    capsys.readouterr()
