import io
import json

import pytest

from mslab.fabricate import FabricationConfig, fabricate
from mslab.graph import HomotopyGraph
from mslab.oracle import DatafileError, OracleData, load_oracle, save_oracle

from conftest import k_graph, make_oracle


def test_round_trip_preserves_everything(tmp_path):
    oracle = fabricate(FabricationConfig(nodes=3, degree=5, multiplicity=2,
                                         alpha=0.7, seed=42))
    path = tmp_path / "oracle.json"
    save_oracle(oracle, path)
    loaded = load_oracle(path)
    assert loaded.graph == oracle.graph
    assert loaded.permutations == oracle.permutations
    assert loaded.success_flags == oracle.success_flags
    assert loaded.durations == oracle.durations
    assert loaded.duration_unit == oracle.duration_unit
    assert loaded.provenance == oracle.provenance
    assert loaded.solutions is None


def test_round_trip_with_solutions_and_params(tmp_path):
    g = HomotopyGraph(2, 2, ((0, 1),), node_params=((1 + 2j, 0j), (3j, -1 + 0j)))
    oracle = make_oracle(g, [[1, 0]])
    oracle.solutions = [[1 + 1j, 2 - 3j], [0j, 5 + 0j]]
    oracle.duration_unit = "microseconds"
    path = tmp_path / "h.json"
    save_oracle(oracle, path)
    loaded = load_oracle(path)
    assert loaded.graph.node_params == g.node_params
    assert loaded.solutions == oracle.solutions
    assert loaded.duration_unit == "microseconds"


def test_irregular_edge_list_round_trips(tmp_path):
    g = HomotopyGraph(3, 2, ((0, 1), (0, 1), (1, 2)))
    oracle = make_oracle(g, [[0, 1], [1, 0], [0, 1]])
    path = tmp_path / "g.json"
    save_oracle(oracle, path)
    assert load_oracle(path).graph.edges == g.edges


def test_image_uses_direction():
    oracle = make_oracle(k_graph(2, 3), [[2, 0, 1]])
    assert [oracle.image(0, s) for s in range(3)] == [2, 0, 1]
    assert [oracle.image(1, s) for s in range(3)] == [1, 2, 0]


def test_alpha_defaults_to_one():
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    oracle.provenance = {}
    assert oracle.alpha() == 1.0


def test_validate_rejects_non_bijection():
    oracle = make_oracle(k_graph(2, 3), [[0, 0, 1]])
    with pytest.raises(DatafileError, match="not a bijection"):
        oracle.validate()


def test_validate_rejects_missing_direction_data():
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    oracle.success_flags = oracle.success_flags[:1]
    with pytest.raises(DatafileError, match="missing direction"):
        oracle.validate()


def test_validate_rejects_non_positive_durations():
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    oracle.durations[1][0] = 0
    with pytest.raises(DatafileError, match="non-positive duration"):
        oracle.validate()


def test_validate_rejects_wrong_lengths_and_units():
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    oracle.success_flags[0] = [True]
    with pytest.raises(DatafileError, match="wrong length"):
        oracle.validate()
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    oracle.duration_unit = "seconds"
    with pytest.raises(DatafileError, match="duration unit"):
        oracle.validate()


def test_load_rejects_foreign_documents():
    with pytest.raises(DatafileError, match="not an oracle datafile"):
        load_oracle(io.StringIO(json.dumps({"hello": 1})))
    with pytest.raises(DatafileError, match="not an oracle datafile"):
        load_oracle(io.StringIO("[1, 2, 3]"))


def test_load_rejects_version_mismatch(tmp_path):
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    buf = io.StringIO()
    save_oracle(oracle, buf)
    doc = json.loads(buf.getvalue())
    doc["version"] = 99
    with pytest.raises(DatafileError, match="version mismatch"):
        load_oracle(io.StringIO(json.dumps(doc)))


def test_load_rejects_missing_direction_flags():
    oracle = make_oracle(k_graph(2, 2), [[0, 1]])
    buf = io.StringIO()
    save_oracle(oracle, buf)
    doc = json.loads(buf.getvalue())
    del doc["success_flags"]["1"]
    with pytest.raises(DatafileError):
        load_oracle(io.StringIO(json.dumps(doc)))
