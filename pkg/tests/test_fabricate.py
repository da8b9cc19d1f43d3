import math

import numpy as np
import pytest
from scipy import stats

from mslab.fabricate import FabricationConfig, edge_rng, fabricate, sample_duration


def test_fabricate_is_deterministic():
    a = fabricate(FabricationConfig(nodes=4, degree=6, multiplicity=2, seed=7))
    b = fabricate(FabricationConfig(nodes=4, degree=6, multiplicity=2, seed=7))
    assert a.permutations == b.permutations
    assert a.success_flags == b.success_flags
    assert a.durations == b.durations


def test_different_seeds_differ():
    a = fabricate(FabricationConfig(nodes=3, degree=50, seed=1))
    b = fabricate(FabricationConfig(nodes=3, degree=50, seed=2))
    assert a.permutations != b.permutations


def test_validates_and_records_provenance():
    oracle = fabricate(FabricationConfig(nodes=3, degree=4, alpha=0.25, seed=3))
    oracle.validate()
    assert oracle.alpha() == 0.25
    assert oracle.provenance["source"] == "fabricated"
    assert oracle.provenance["seed"] == 3
    assert oracle.duration_unit == "ticks"


def test_permutations_are_uniform_chi_square():
    # d = 3: 6 possible permutations, many independent edges
    trials = 3000
    counts = {}
    for seed in range(trials):
        oracle = fabricate(FabricationConfig(nodes=2, degree=3, seed=seed))
        key = tuple(oracle.permutations[0])
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    chi2 = sum((c - trials / 6) ** 2 / (trials / 6) for c in counts.values())
    # 5 degrees of freedom; 99.9th percentile is about 20.5
    assert chi2 < stats.chi2.ppf(0.999, df=5)


def test_direction_flags_match_alpha_and_are_independent():
    oracle = fabricate(FabricationConfig(nodes=2, degree=4000, alpha=0.6, seed=9))
    fwd = np.asarray(oracle.success_flags[0], dtype=float)
    rev = np.asarray(oracle.success_flags[1], dtype=float)
    for rate in (fwd.mean(), rev.mean()):
        assert abs(rate - 0.6) < 4 * math.sqrt(0.6 * 0.4 / 4000)
    # the two directions of one edge are drawn independently
    corr = np.corrcoef(fwd, rev)[0, 1]
    assert abs(corr) < 0.08
    assert not np.array_equal(fwd, rev)


def test_duration_distribution():
    rng = edge_rng(0, 0)
    samples = np.array([sample_duration(rng) for _ in range(200_000)])
    assert samples.min() >= 10
    # trials-to-10-successes at p = 0.3: mean 10 / 0.3
    assert abs(samples.mean() - 10 / 0.3) / (10 / 0.3) < 0.01


def test_fabricated_durations_use_the_same_model():
    oracle = fabricate(FabricationConfig(nodes=2, degree=20000, seed=5))
    flat = np.asarray(oracle.durations).ravel()
    assert flat.min() >= 10
    assert abs(flat.mean() - 10 / 0.3) / (10 / 0.3) < 0.02


def test_edge_streams_are_order_independent():
    # edge 2's content does not depend on whether other edges were drawn
    full = fabricate(FabricationConfig(nodes=3, degree=8, multiplicity=1, seed=11))
    rng = edge_rng(11, 2)
    assert full.permutations[2] == rng.permutation(8).tolist()


@pytest.mark.parametrize("bad", [
    dict(nodes=3, degree=4, alpha=1.5),
    dict(nodes=3, degree=4, alpha=-0.1),
    dict(nodes=3, degree=4, nb_successes=0),
    dict(nodes=3, degree=4, nb_success_prob=0.0),
])
def test_config_rejections(bad):
    with pytest.raises(ValueError):
        FabricationConfig(**bad)
