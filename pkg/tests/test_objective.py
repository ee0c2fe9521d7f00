import numpy as np
import pytest

from gnalign.graph import ConservationMode, Graph, load_edge_list
from gnalign.matching import Matching, ScoreMatrix
from gnalign.objective import (TradeoffConfig, balanced_objective, conserved_count,
                               conserved_count_quadratic, mean_real_similarity, similarity_sum)
from gnalign.oracle import literal_conserved_count

from _instances import random_graph

MODES = list(ConservationMode)


def test_triangle_all_conserved():
    g = Graph("abc", [(0, 1), (1, 2), (0, 2)])
    assert conserved_count(Matching.identity(3), g, g, "strict") == 3


def test_path_automorphism():
    g, _ = load_edge_list("a b\nb c")
    swap = Matching([g.index("c"), g.index("b"), g.index("a")])
    assert conserved_count(swap, g, g, "strict") == 2


def test_path_strict_vs_asymmetric():
    g, _ = load_edge_list("x y\ny z")
    h, _ = load_edge_list("a b\nb c")
    m = Matching([g.index("x"), g.index("z"), g.index("y")])
    assert conserved_count(m, g, h, "strict") == 1
    # a-c share b in H while x-y is an edge in G, so that pair counts too
    assert conserved_count(m, g, h, "cases123") == 3
    assert literal_conserved_count(m, g, h, "cases123") == 3


@pytest.mark.parametrize("mode", MODES)
def test_k4_any_matching(mode):
    k4 = Graph("abcd", [(i, j) for i in range(4) for j in range(i + 1, 4)])
    m = Matching([2, 0, 3, 1])
    assert conserved_count_quadratic(m, k4, k4, ConservationMode.STRICT) == 6
    assert conserved_count(m, k4, k4, mode) == 6


def test_empty_graph():
    e = Graph("abc")
    assert conserved_count(Matching([1, 2, 0]), e, e) == 0


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("seed", range(8))
def test_three_evaluators_agree(mode, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    g, h = random_graph(rng, n, 0.3), random_graph(rng, n, 0.3)
    m = Matching(rng.permutation(n))
    want = literal_conserved_count(m, g, h, mode)
    assert conserved_count(m, g, h, mode) == want
    assert conserved_count_quadratic(m, g, h, mode) == want


def test_similarity_sum_cases():
    assert similarity_sum(Matching.identity(5), ScoreMatrix(np.eye(5))) == 5.0
    s = ScoreMatrix.from_allowed(np.eye(3, dtype=bool))
    assert similarity_sum(Matching([1, 0, 2]), s) == float("-inf")
    rng = np.random.default_rng(0)
    c = rng.random((6, 6))
    m = Matching(rng.permutation(6))
    assert similarity_sum(m, ScoreMatrix(c)) == pytest.approx(c[np.arange(6), m.map_h_to_g].sum())


def test_balanced_endpoints_and_mix():
    g = Graph("abc", [(0, 1), (1, 2)])
    h = Graph("xyz", [(0, 1), (0, 2)])
    c = np.array([[0.2, 0.9, 0.1], [0.4, 0.3, 0.8], [0.5, 0.6, 0.7]])
    s = ScoreMatrix(c)
    m = Matching([1, 0, 2])
    j = conserved_count(m, g, h)
    sim = c[0, 1] + c[1, 0] + c[2, 2]
    assert balanced_objective(m, g, h, s, TradeoffConfig(1.0)) == j
    assert balanced_objective(m, g, h, s, TradeoffConfig(0.0)) == pytest.approx(sim)
    assert balanced_objective(m, g, h, s, TradeoffConfig(0.6)) == pytest.approx(0.6 * j + 0.4 * sim)


def test_balanced_flags_infeasible_even_at_lambda_one():
    g = Graph("ab")
    s = ScoreMatrix.from_allowed(np.eye(2, dtype=bool))
    assert balanced_objective(Matching([1, 0]), g, g, s, TradeoffConfig(1.0)) == float("-inf")


def test_mean_real_similarity_ignores_dummies():
    g = Graph(["a", "b", "__dummy__0"])
    h = Graph(["x", "__dummy__0", "__dummy__1"])
    s = ScoreMatrix(np.full((3, 3), 2.0))
    assert mean_real_similarity(Matching([0, 1, 2]), s, g, h) == 2.0


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_tradeoff_validates_lambda(bad):
    with pytest.raises(ValueError):
        TradeoffConfig(bad)
