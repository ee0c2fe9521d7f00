"""Conserved interactions J, similarity S and the balanced objective.

J is computed two independent ways: by scanning candidate H-pairs with the
mode's pair predicate, and as a signed sum of quadratic forms
``1/2 tr(K_G^T M K_H M^T)`` where each ``K`` is the edge matrix ``E`` or
the edge-or-common-neighbour matrix ``W``. Because ``E <= W`` entrywise,
``(E_H & W_G) | (W_H & E_G)`` has intersection ``E_H & E_G`` and the
cases 1-3 count is ``EW + WE - EE``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import ConservationMode, Graph
from .matching import Matching, ScoreMatrix, is_feasible

# (coefficient, H-side matrix, G-side matrix)
MODE_TERMS = {
    ConservationMode.STRICT: ((1, "E", "E"),),
    ConservationMode.SECOND_ORDER_ASYM: ((1, "E", "W"), (1, "W", "E"), (-1, "E", "E")),
    ConservationMode.SECOND_ORDER_SYM: ((1, "W", "W"),),
}


@dataclass(frozen=True)
class TradeoffConfig:
    lam: float = 0.5
    mode: ConservationMode = ConservationMode.STRICT

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        object.__setattr__(self, "mode", ConservationMode.coerce(self.mode))


def structure_matrix(graph: Graph, kind: str) -> sp.csr_matrix:
    if kind == "E":
        return graph.adjacency_matrix()
    if kind == "W":
        return graph.second_order_matrix()
    raise ValueError(kind)


def _check_sizes(matching: Matching, g: Graph, h: Graph):
    if not (matching.size == g.num_vertices == h.num_vertices):
        raise ValueError(f"size mismatch: matching {matching.size}, "
                         f"G {g.num_vertices}, H {h.num_vertices}")


def _upper_keys(mat: sp.spmatrix, n: int) -> np.ndarray:
    c = sp.triu(mat, k=1).tocoo()
    return np.sort(c.row.astype(np.int64) * n + c.col)


def _member(keys: np.ndarray, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    q = np.minimum(a, b) * n + np.maximum(a, b)
    if keys.size == 0:
        return np.zeros(q.shape, dtype=bool)
    pos = np.minimum(np.searchsorted(keys, q), keys.size - 1)
    return keys[pos] == q


def conserved_count(matching: Matching, g: Graph, h: Graph,
                    mode: ConservationMode = ConservationMode.STRICT) -> int:
    """Number of unordered H-pairs whose aligned G-pair satisfies the mode's predicate."""
    mode = ConservationMode.coerce(mode)
    _check_sizes(matching, g, h)
    n = matching.size
    e_h = _upper_keys(h.adjacency_matrix(), n)
    cand = e_h if mode is ConservationMode.STRICT else _upper_keys(h.second_order_matrix(), n)
    if cand.size == 0:
        return 0
    hi, hj = cand // n, cand % n
    pi = matching.map_h_to_g
    gi, gj = pi[hi], pi[hj]
    in_eh = _member(e_h, hi, hj, n)
    in_eg = _member(_upper_keys(g.adjacency_matrix(), n), gi, gj, n)
    if mode is ConservationMode.STRICT:
        ok = in_eh & in_eg
    else:
        in_wg = _member(_upper_keys(g.second_order_matrix(), n), gi, gj, n)
        if mode is ConservationMode.SECOND_ORDER_ASYM:
            # every candidate is in W_H
            ok = (in_eh & in_wg) | in_eg
        else:
            ok = in_wg
    return int(ok.sum())


def permutation_operator(matching: Matching) -> sp.csr_matrix:
    """Sparse ``M`` with ``M[g, h] = 1`` iff ``h`` is matched to ``g``."""
    n = matching.size
    return sp.csr_matrix((np.ones(n, dtype=np.int64), (matching.map_h_to_g, np.arange(n))),
                         shape=(n, n))


def conserved_count_quadratic(matching: Matching, g: Graph, h: Graph,
                              mode: ConservationMode = ConservationMode.STRICT) -> int:
    """Same count as :func:`conserved_count`, via ``1/2 tr(K_G^T M K_H M^T)`` terms."""
    mode = ConservationMode.coerce(mode)
    _check_sizes(matching, g, h)
    m = permutation_operator(matching)
    total = 0
    for coef, kh, kg in MODE_TERMS[mode]:
        k_g = structure_matrix(g, kg).astype(np.int64)
        k_h = structure_matrix(h, kh).astype(np.int64)
        total += coef * int(k_g.multiply(m @ k_h @ m.T).sum())
    if total % 2:
        raise AssertionError("quadratic form of a symmetric pair count must be even")
    return total // 2


def similarity_sum(matching: Matching, scores: ScoreMatrix, g: Graph | None = None,
                   h: Graph | None = None) -> float:
    """Total score of matched pairs; ``-inf`` if any matched pair is forbidden.

    With graphs given, pairs touching a dummy vertex contribute 0.
    """
    if not is_feasible(matching, scores):
        return float("-inf")
    n = matching.size
    vals = scores.values[np.arange(n), matching.map_h_to_g]
    if g is not None and h is not None:
        vals = np.where(h.is_dummy | g.is_dummy[matching.map_h_to_g], 0.0, vals)
    return float(vals.sum())


def mean_real_similarity(matching: Matching, scores: ScoreMatrix, g: Graph, h: Graph) -> float:
    real = ~(h.is_dummy | g.is_dummy[matching.map_h_to_g])
    if not real.any():
        return 0.0
    return similarity_sum(matching, scores, g, h) / int(real.sum())


def balanced_objective(matching: Matching, g: Graph, h: Graph, scores: ScoreMatrix,
                       cfg: TradeoffConfig) -> float:
    """``lam * J + (1 - lam) * S``; ``-inf`` for an infeasible matching at any ``lam``."""
    s = similarity_sum(matching, scores, g, h)
    if s == float("-inf"):
        return s
    j = conserved_count(matching, g, h, cfg.mode)
    return cfg.lam * j + (1.0 - cfg.lam) * s
