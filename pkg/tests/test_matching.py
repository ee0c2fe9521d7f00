import io

import numpy as np
import pytest

from gnalign.exceptions import ParseError
from gnalign.graph import Graph, pad_pair
from gnalign.matching import (Matching, ScoreMatrix, is_feasible, load_similarity,
                              permute_graph, write_similarity)

from _instances import random_graph


def test_matching_rejects_non_bijection():
    with pytest.raises(ValueError):
        Matching([0, 0, 1])


def test_inverse_and_matrix():
    m = Matching([2, 0, 1])
    assert m.inverse().inverse() == m
    p = m.to_matrix()
    assert p[0, 2] == 1 and p.sum() == 3


def test_feasibility():
    n = 4
    assert is_feasible(Matching([3, 1, 0, 2]), ScoreMatrix(np.ones((n, n))))
    only_id = ScoreMatrix.from_allowed(np.eye(n, dtype=bool))
    assert is_feasible(Matching.identity(n), only_id)
    assert not is_feasible(Matching([1, 0, 2, 3]), only_id)


def test_forbidden_values_are_zeroed_not_sentinels():
    s = ScoreMatrix([[1.0, -np.inf], [2.0, 3.0]])
    assert s.is_forbidden(0, 1)
    assert s.values[0, 1] == 0.0
    assert s.masked()[0, 1] == -np.inf


def test_padded_allows_dummy_pairs():
    s = ScoreMatrix.from_allowed(np.eye(2, dtype=bool)).padded(3)
    assert s.allowed[2].all() and s.allowed[:, 2].all()
    assert not s.allowed[0, 1]


def test_permute_identity_and_swap():
    h = Graph(["a", "b"], [(0, 1)])
    assert permute_graph(Matching.identity(2), h).edges.tolist() == [[0, 1]]
    assert permute_graph(Matching([1, 0]), h).edges.tolist() == [[0, 1]]


@pytest.mark.parametrize("seed", range(5))
def test_permute_matches_pap_t(seed):
    rng = np.random.default_rng(seed)
    h = random_graph(rng, 9, 0.4)
    m = Matching(rng.permutation(9))
    p = np.zeros((9, 9), dtype=int)
    p[m.map_h_to_g, np.arange(9)] = 1  # P[g, h]
    expect = p @ h.adjacency_matrix(dense=True) @ p.T
    np.testing.assert_array_equal(permute_graph(m, h).adjacency_matrix(dense=True), expect)


def test_similarity_load_and_round_trip():
    g = Graph(["x", "y"])
    h = Graph(["a", "b", "c"])
    gp, hp = pad_pair(g, h)
    s = load_similarity("a\tx\t0.5\nb\ty\t1.5\n", gp, hp, constrained=True)
    assert s.shape == (3, 3)
    assert s.allowed[0, 0] and not s.allowed[0, 1]
    assert s.allowed[:, 2].all()  # any H vertex may sit on the G dummy
    assert not s.allowed[2, :2].any()
    buf = io.StringIO()
    write_similarity(s, gp, hp, buf)
    again = load_similarity(buf.getvalue(), gp, hp, constrained=True)
    np.testing.assert_array_equal(again.values, s.values)
    np.testing.assert_array_equal(again.allowed, s.allowed)


def test_similarity_unknown_label():
    g, h = Graph(["x"]), Graph(["a"])
    with pytest.raises(ParseError):
        load_similarity("a\tq\t1\n", g, h)
