import numpy as np
import pytest

from gnalign.exceptions import BudgetExceededError
from gnalign.graph import Graph
from gnalign.matching import Matching, ScoreMatrix
from gnalign.oracle import OracleBudget, brute_force_align, chain_mp_oracle, enumerate_matchings

from _instances import random_graph, random_tree_instance


def cycle(n, p="c"):
    return Graph([f"{p}{i}" for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def path(n, p="p"):
    return Graph([f"{p}{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def test_equal_graphs_reach_edge_count():
    g = random_graph(np.random.default_rng(0), 7, 0.4)
    _, val = brute_force_align(g, g, None, 1.0)
    assert val == g.num_edges


def test_single_allowed_bijection():
    target = Matching([2, 0, 1])
    allowed = target.to_matrix().astype(bool)
    g = cycle(3)
    m, _ = brute_force_align(g, g, ScoreMatrix.from_allowed(allowed), 1.0)
    assert m == target


def test_five_cycle_against_five_path():
    _, val = brute_force_align(cycle(5), path(5), None, 1.0)
    assert val == 4


def test_enumeration_respects_mask_and_budget():
    allowed = np.eye(4, dtype=bool)
    allowed[0, 1] = allowed[1, 0] = True
    perms = enumerate_matchings(ScoreMatrix.from_allowed(allowed))
    assert sorted(map(tuple, perms.tolist())) == [(0, 1, 2, 3), (1, 0, 2, 3)]
    with pytest.raises(BudgetExceededError):
        brute_force_align(cycle(10), cycle(10), None, 1.0)
    with pytest.raises(BudgetExceededError):
        enumerate_matchings(ScoreMatrix.zeros(6), OracleBudget(max_n=9, max_states=100))


def test_oracle_dominates_solver_outputs():
    from gnalign.ga import GaConfig, ga_align
    from gnalign.objective import TradeoffConfig
    rng = np.random.default_rng(2)
    for _ in range(5):
        g, h = random_graph(rng, 7, 0.4), random_graph(rng, 7, 0.4)
        s = ScoreMatrix(rng.random((7, 7)))
        _, opt = brute_force_align(g, h, s, 0.5)
        assert ga_align(g, h, s, GaConfig(TradeoffConfig(0.5))).objective <= opt + 1e-12


def test_chain_oracle_budget():
    _, _, _, cg = random_tree_instance(np.random.default_rng(1), "strict", max_clusters=12,
                                       max_states=20_000)
    with pytest.raises(BudgetExceededError):
        chain_mp_oracle(cg, OracleBudget(max_states=0))
