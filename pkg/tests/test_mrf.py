import math

import numpy as np
import pytest

from gnalign.clusters import build_cluster_graph, load_partition
from gnalign.graph import Graph
from gnalign.mrf import (FREE, build_mrf, conditional_probability, gibbs_sample,
                         mrf_extract_alignment)
from gnalign.oracle import brute_force_lap, gibbs_stationary_marginals

from _instances import random_tree_instance


def two_singletons():
    g = Graph(["a", "b"], [(0, 1)])
    h = Graph(["x", "y"], [(0, 1)])
    part = load_partition("1\tG\ta\n1\tH\tx\n2\tG\tb\n2\tH\ty\n")
    return build_cluster_graph(part, g, h)


def square_cluster(k, edges=()):
    g = Graph([f"g{i}" for i in range(k)], edges)
    h = Graph([f"h{i}" for i in range(k)], edges)
    part = load_partition("".join(f"1\tG\tg{i}\n1\tH\th{i}\n" for i in range(k)))
    return build_cluster_graph(part, g, h)


def test_logistic_conditional():
    assert conditional_probability(0.51, 0.0, 3) == pytest.approx(1 / (1 + math.exp(-0.51)))
    assert conditional_probability(0.0, -1.0, 2) == pytest.approx(1 / (1 + math.e ** 2))


def test_clamped_singletons_are_neighbours():
    model = build_mrf(two_singletons())
    assert model.clamp.tolist() == [1, 1]
    assert model.edge_set() == {(0, 1)}
    np.testing.assert_array_equal(gibbs_sample(model, 10, 10), [1.0, 1.0])


def test_no_interactions_no_neighbours():
    model = build_mrf(square_cluster(3))
    assert model.num_variables == 9
    assert (model.clamp == FREE).all()
    assert all(len(nb) == 0 for nb in model.neighbors)


def test_beta_zero_marginals_are_logistic_alpha():
    model = build_mrf(square_cluster(2, [(0, 1)]), alpha=0.51, beta=0.0)
    est = gibbs_sample(model, burn_in=200, samples=20_000, seed=3)
    np.testing.assert_allclose(est, 1 / (1 + math.exp(-0.51)), atol=0.015)


@pytest.mark.parametrize("seed", range(4))
def test_sampler_tracks_exact_stationary_law(seed):
    rng = np.random.default_rng(seed)
    while True:
        _, _, _, cg = random_tree_instance(rng, "cases123", max_clusters=3)
        model = build_mrf(cg, alpha=0.51, beta=-1.5)
        if 0 < model.free.size <= 10:
            break
    exact = gibbs_stationary_marginals(model)
    est = gibbs_sample(model, burn_in=500, samples=20_000, seed=seed)
    np.testing.assert_allclose(est, exact, atol=0.02)


def test_sampler_is_seeded():
    model = build_mrf(square_cluster(3, [(0, 1), (1, 2)]))
    a = gibbs_sample(model, 50, 500, seed=9)
    np.testing.assert_array_equal(a, gibbs_sample(model, 50, 500, seed=9))


def test_extraction_dominant_and_ties():
    cg = square_cluster(3)
    model = build_mrf(cg)
    marg = np.zeros(9)
    for hi, gi in [(0, 2), (1, 0), (2, 1)]:
        marg[hi * 3 + gi] = 0.9
    assert mrf_extract_alignment(model, marg).map_h_to_g.tolist() == [2, 0, 1]
    assert mrf_extract_alignment(model, np.full(9, 0.5)).map_h_to_g.tolist() == [0, 1, 2]


@pytest.mark.parametrize("k", [4, 6])
def test_extraction_equals_factorial_oracle(k):
    rng = np.random.default_rng(k)
    cg = square_cluster(k)
    model = build_mrf(cg)
    marg = rng.random(k * k)
    got = mrf_extract_alignment(model, marg)
    want, _ = brute_force_lap(marg.reshape(k, k))
    assert got.map_h_to_g.tolist() == want.map_h_to_g.tolist()


def test_argument_validation():
    model = build_mrf(square_cluster(2))
    with pytest.raises(ValueError):
        gibbs_sample(model, samples=0)
    with pytest.raises(ValueError):
        gibbs_sample(model, burn_in=-1)
