import math

import numpy as np
import pytest

from mslab import engine
from mslab.fabricate import FabricationConfig, fabricate
from mslab.graph import validate_state
from mslab.potential import PotentialKind
from mslab.simulate import (SimulationConfig, compute_metrics, pack_oracle,
                            run, run_sequential_baseline)

from conftest import k_graph, make_oracle

BOTH_ENGINES = [name for name in ("python", "compiled")
                if name == "python" or engine.get_kernel("auto")[0] == "compiled"]


def identity_k3(d: int = 2, flags_value: bool = True):
    g = k_graph(3, d, 1)
    flags = [[flags_value] * d for _ in range(g.n_directed)]
    return make_oracle(g, [list(range(d))] * 3, flags=flags,
                       alpha=1.0 if flags_value else 0.0)


@pytest.mark.parametrize("eng", BOTH_ENGINES)
def test_hand_traced_identity_run(eng):
    # K3, identity correspondences, all tracks succeed, unit durations.
    # From (node 0, solution 0) the only reachable solutions are the copies of
    # index 0, so the run exhausts after exactly three informative tracks:
    # 0->1, 0->2 (new solutions), then 1->2 (closes the triangle, no news).
    oracle = identity_k3(d=2)
    metrics, state = run(oracle, SimulationConfig(threads=1, engine=eng))
    assert metrics.status == "exhausted"
    assert metrics.known_counts == [1, 1, 1]
    assert metrics.tracks == 3
    assert metrics.successes == 3
    assert metrics.failures == 0
    assert metrics.redundant_successes == 0
    assert metrics.wall_time == 3
    assert state.known == [{0}, {0}, {0}]
    assert state.correspondences == [{(0, 0)}, {(0, 0)}, {(0, 0)}]
    assert validate_state(state, oracle.graph) == []


@pytest.mark.parametrize("eng", BOTH_ENGINES)
def test_hand_traced_all_failures(eng):
    # Same topology, every track fails: the two candidates from the seed node
    # are tried once each and the run exhausts with nothing new discovered.
    oracle = identity_k3(d=2, flags_value=False)
    metrics, state = run(oracle, SimulationConfig(threads=1, engine=eng))
    assert metrics.status == "exhausted"
    assert metrics.tracks == 2
    assert metrics.successes == 0
    assert metrics.failures == 2
    assert metrics.known_counts == [1, 0, 0]
    assert state.failures[0] == {0}       # directed edge 0: node 0 -> 1
    assert state.failures[2] == {0}       # directed edge 2: node 0 -> 2
    assert validate_state(state, oracle.graph) == []


@pytest.mark.parametrize("eng", BOTH_ENGINES)
def test_saturation_on_a_cyclic_correspondence(eng):
    # d = 3 full cycle on one K2 edge pair: each success at the head node seeds
    # new candidate tasks until both nodes hold all three solutions.
    g = k_graph(2, 3, 2)
    # edge 0: cycle (0 1 2); edge 1: identity
    oracle = make_oracle(g, [[1, 2, 0], [0, 1, 2]])
    metrics, state = run(oracle, SimulationConfig(threads=1, engine=eng))
    assert metrics.status == "saturated"
    assert metrics.saturated_node is not None
    assert 3 in metrics.known_counts
    assert validate_state(state, oracle.graph) == []


def test_seed_solution_checks():
    oracle = identity_k3()
    with pytest.raises(ValueError, match="invalid seed"):
        run(oracle, SimulationConfig(), seed_node=5)
    with pytest.raises(ValueError, match="invalid seed"):
        run(oracle, SimulationConfig(), seed_solution=7)


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig(threads=0)
    with pytest.raises(ValueError):
        SimulationConfig(track_budget=0)


def test_budget_exceeded_status():
    oracle = fabricate(FabricationConfig(nodes=4, degree=32, multiplicity=2,
                                         alpha=0.9, seed=3))
    metrics, _ = run(oracle, SimulationConfig(threads=4, track_budget=5))
    assert metrics.status == "budget-exceeded"
    assert metrics.tracks <= 5


def test_determinism_same_config_same_run():
    oracle = fabricate(FabricationConfig(nodes=4, degree=24, multiplicity=2,
                                         alpha=0.8, seed=12))
    cfg = SimulationConfig(threads=8, potential=PotentialKind("weighted", 2.0))
    m1, s1 = run(oracle, cfg)
    m2, s2 = run(oracle, cfg)
    assert m1 == m2
    assert s1.known == s2.known and s1.correspondences == s2.correspondences


@pytest.mark.parametrize("pot", [
    PotentialKind("greedy"),
    PotentialKind("ordinal"),
    PotentialKind("weighted", 1.0),
    PotentialKind("weighted", 64.0),
    PotentialKind("weighted", math.inf),
    PotentialKind("weighted", 2.0, dynamic_norm=True),
])
@pytest.mark.parametrize("threads,alpha,seed", [
    (1, 1.0, 0), (4, 0.7, 1), (16, 0.45, 2), (3, 0.95, 3),
])
def test_engines_agree_exactly(pot, threads, alpha, seed):
    if len(BOTH_ENGINES) < 2:
        pytest.skip("compiled engine not built")
    oracle = fabricate(FabricationConfig(nodes=4, degree=16, multiplicity=2,
                                         alpha=alpha, seed=seed))
    packed = pack_oracle(oracle)
    runs = {}
    for eng in BOTH_ENGINES:
        cfg = SimulationConfig(threads=threads, potential=pot, engine=eng)
        runs[eng] = run(packed, cfg)
    m_py, s_py = runs["python"]
    m_c, s_c = runs["compiled"]
    assert m_py == m_c
    assert s_py.known == s_c.known
    assert s_py.correspondences == s_c.correspondences
    assert s_py.failures == s_c.failures
    assert sorted((t.start, t.dedge, t.scheduled_at, t.duration)
                  for t in s_py.inflight) == \
        sorted((t.start, t.dedge, t.scheduled_at, t.duration)
               for t in s_c.inflight)


@pytest.mark.parametrize("threads", [1, 2, 8, 64])
@pytest.mark.parametrize("alpha,seed", [(1.0, 10), (0.6, 11), (0.3, 12)])
def test_invariants_on_final_states(threads, alpha, seed):
    oracle = fabricate(FabricationConfig(nodes=4, degree=20, multiplicity=2,
                                         alpha=alpha, seed=seed))
    metrics, state = run(oracle, SimulationConfig(threads=threads))
    # tasks abandoned at termination may have become moot while in flight:
    # their pair arrived from the opposite direction after they started.
    # Apart from those, the final state satisfies every invariant.
    live = [t for t in state.inflight
            if t.start not in state.tail_indices(oracle.graph, t.dedge)]
    moot = [t for t in state.inflight if t not in live]
    violations = validate_state(state, oracle.graph)
    assert all("duplicates a correspondence" in v for v in violations)
    assert len(violations) == len(moot)
    state.inflight = live
    assert validate_state(state, oracle.graph) == []
    state.inflight = live + moot
    # every successful track either added a correspondence pair or was made
    # redundant by the opposite direction finishing first
    pairs = sum(len(c) for c in state.correspondences)
    assert pairs == metrics.successes - metrics.redundant_successes
    # tracks counts completed tracks; abandoned in-flight ones are separate
    assert metrics.tracks == metrics.successes + metrics.failures
    if metrics.status == "exhausted":
        assert state.inflight == []
    assert metrics.known_counts == [len(q) for q in state.known]
    if threads == 1:
        # a single thread can never race the two directions of an edge
        assert metrics.redundant_successes == 0
        assert len(state.inflight) <= (0 if metrics.status != "budget-exceeded"
                                       else 1)


def test_single_thread_wall_time_is_sum_of_durations():
    oracle = fabricate(FabricationConfig(nodes=3, degree=12, multiplicity=2,
                                         alpha=0.9, seed=21))
    metrics, state = run(oracle, SimulationConfig(threads=1))
    # one thread never waits: it is busy from the first track to termination
    assert metrics.busy == [metrics.wall_time]
    assert metrics.idle == [0]
    assert metrics.idle_fraction == 0.0


def test_outcomes_follow_the_oracle():
    # alpha = 1 with full-cycle correspondences saturates and the discovered
    # pairs all agree with the oracle's ground truth
    g = k_graph(2, 4, 2)
    # the loop around the two parallel edges is the 4-cycle, so all four
    # solutions are reachable from one seed
    oracle = make_oracle(g, [[1, 2, 3, 0], [0, 1, 2, 3]])
    metrics, state = run(oracle, SimulationConfig(threads=2))
    assert metrics.status == "saturated"
    for i, j in state.correspondences[0]:
        assert oracle.image(0, i) == j


def test_redundant_successes_appear_under_contention():
    # with many threads both directions of an edge run concurrently, so some
    # successes must arrive after their pair is already known
    found = 0
    for seed in range(8):
        oracle = fabricate(FabricationConfig(nodes=3, degree=24,
                                             multiplicity=2, alpha=1.0,
                                             seed=seed))
        metrics, state = run(oracle, SimulationConfig(threads=32))
        found += metrics.redundant_successes
        pairs = sum(len(c) for c in state.correspondences)
        assert pairs == metrics.successes - metrics.redundant_successes
    assert found > 0


def test_more_threads_never_slow_the_identity_instance():
    oracle = fabricate(FabricationConfig(nodes=5, degree=64, alpha=1.0, seed=4))
    base = run_sequential_baseline(oracle, SimulationConfig())
    par, _ = run(oracle, SimulationConfig(threads=16))
    speedup, eff, idle = compute_metrics(base, par, 16)
    assert par.wall_time <= base.wall_time
    assert speedup >= 1.0
    assert 0.0 < eff <= 1.0
    assert 0.0 <= idle <= 1.0


def test_compute_metrics_rejects_zero_wall():
    m = run_sequential_baseline(identity_k3(), SimulationConfig())
    fake = run_sequential_baseline(identity_k3(), SimulationConfig())
    fake.wall_time = 0
    with pytest.raises(ZeroDivisionError):
        compute_metrics(m, fake, 2)


def test_alternate_seed_node_changes_the_run():
    oracle = fabricate(FabricationConfig(nodes=4, degree=16, seed=6))
    m0, _ = run(oracle, SimulationConfig(), seed_node=0)
    m3, _ = run(oracle, SimulationConfig(), seed_node=3, seed_solution=5)
    assert (m0.tracks, m0.wall_time) != (m3.tracks, m3.wall_time) or \
        m0.status == m3.status == "saturated"


def test_engine_env_override(monkeypatch):
    assert engine.get_kernel("python")[0] == "python"
    with pytest.raises(ValueError):
        engine.get_kernel("bogus")
