"""Exhaustive solvers and literal formula evaluators used as ground truth.

Nothing here shares code with the optimised solvers: adjacency is taken
as dense 0/1 arrays, second-order relations are found with explicit loops
and objectives are evaluated pair by pair from their definitions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BudgetExceededError
from .graph import ConservationMode, Graph
from .matching import Matching, ScoreMatrix

_BATCH = 1 << 16


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 9
    max_states: int = 1 << 20


def dense_edges(graph: Graph) -> np.ndarray:
    n = graph.num_vertices
    a = np.zeros((n, n), dtype=bool)
    for i, j in graph.edges.tolist():
        a[i, j] = a[j, i] = True
    return a


def dense_second_order(graph: Graph) -> np.ndarray:
    """``W[i, j]``: ``i != j`` and adjacent, or some ``k != i, j`` adjacent to both."""
    a = dense_edges(graph)
    n = len(a)
    w = a.copy()
    for i in range(n):
        for j in range(n):
            if i == j or w[i, j]:
                continue
            for k in range(n):
                if k != i and k != j and a[i, k] and a[k, j]:
                    w[i, j] = True
                    break
    return w


def pair_conserved(mode: ConservationMode, e_h, w_h, e_g, w_g):
    """Case predicate; arguments may be booleans or boolean arrays."""
    if mode is ConservationMode.STRICT:
        return e_h & e_g
    if mode is ConservationMode.SECOND_ORDER_ASYM:
        return (e_h & w_g) | (w_h & e_g)
    return w_h & w_g


class _Literal:
    def __init__(self, g: Graph, h: Graph, mode):
        self.mode = ConservationMode.coerce(mode)
        self.eg, self.wg = dense_edges(g), dense_second_order(g)
        self.eh, self.wh = dense_edges(h), dense_second_order(h)
        n = h.num_vertices
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
                      if self.wh[i, j]]

    def conserved(self, perms: np.ndarray) -> np.ndarray:
        """Conserved count for each row of ``perms`` (H index -> G index)."""
        out = np.zeros(len(perms), dtype=np.int64)
        for i, j in self.pairs:
            gi, gj = perms[:, i], perms[:, j]
            out += pair_conserved(self.mode, self.eh[i, j], self.wh[i, j],
                                  self.eg[gi, gj], self.wg[gi, gj])
        return out


def literal_conserved_count(matching: Matching, g: Graph, h: Graph,
                            mode=ConservationMode.STRICT) -> int:
    """Scan every unordered H-pair against the case predicate."""
    mode = ConservationMode.coerce(mode)
    eg, wg, eh, wh = dense_edges(g), dense_second_order(g), dense_edges(h), dense_second_order(h)
    pi = matching.map_h_to_g
    n = matching.size
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if pair_conserved(mode, eh[i, j], wh[i, j], eg[pi[i], pi[j]], wg[pi[i], pi[j]]):
                count += 1
    return count


def _feasible_perms(allowed: np.ndarray, limit: int):
    """Allowed bijections in lexicographic order, by depth-first search."""
    n = len(allowed)
    options = [np.flatnonzero(allowed[i]).tolist() for i in range(n)]
    out = []
    cur = [0] * n
    taken = [False] * n

    def rec(i):
        if i == n:
            out.append(list(cur))
            if len(out) > limit:
                raise BudgetExceededError(f"more than {limit} feasible matchings")
            return
        for j in options[i]:
            if not taken[j]:
                taken[j] = True
                cur[i] = j
                rec(i + 1)
                taken[j] = False

    rec(0)
    return np.array(out, dtype=np.int64).reshape(len(out), n)


def enumerate_matchings(scores: ScoreMatrix, budget: OracleBudget = OracleBudget()) -> np.ndarray:
    n = scores.n_rows
    if scores.fully_allowed:
        if n > budget.max_n:
            raise BudgetExceededError(f"n={n} exceeds oracle budget max_n={budget.max_n}")
        if math.factorial(n) > budget.max_states:
            raise BudgetExceededError(f"{n}! matchings exceed budget {budget.max_states}")
        return np.array(list(itertools.permutations(range(n))),
                        dtype=np.int64).reshape(math.factorial(n), n)
    return _feasible_perms(scores.allowed, budget.max_states)


def brute_force_lap(weights, allowed=None, budget: OracleBudget = OracleBudget()):
    """Best total weight over all allowed bijections, and the first optimal one."""
    w = np.asarray(weights, dtype=np.float64)
    a = np.isfinite(w) if allowed is None else np.asarray(allowed, bool) & np.isfinite(w)
    perms = enumerate_matchings(ScoreMatrix(np.where(a, w, 0.0), a), budget)
    if len(perms) == 0:
        return None, float("-inf")
    rows = np.arange(w.shape[0])
    totals = np.array([w[rows, p].sum() for p in perms]) if w.shape[0] else np.zeros(1)
    k = int(np.argmax(totals))
    return Matching(perms[k]), float(totals[k])


def brute_force_align(g: Graph, h: Graph, scores: ScoreMatrix | None, lam: float = 1.0,
                      mode=ConservationMode.STRICT,
                      budget: OracleBudget = OracleBudget()) -> tuple[Matching, float]:
    """Exhaustive maximum of ``lam * J + (1 - lam) * S`` over allowed bijections.

    Pairs touching a dummy vertex score 0. Ties go to the lexicographically
    smallest matching.
    """
    n = g.num_vertices
    if h.num_vertices != n:
        raise ValueError("graphs must have equal (padded) size")
    if scores is None:
        scores = ScoreMatrix.zeros(n)
    perms = enumerate_matchings(scores, budget)
    if len(perms) == 0:
        raise BudgetExceededError("no feasible matching to enumerate")
    lit = _Literal(g, h, mode)
    rows = np.arange(n)
    best_val, best = -np.inf, None
    for s in range(0, len(perms), _BATCH):
        batch = perms[s:s + _BATCH]
        sim = np.zeros(len(batch))
        for i in rows:
            col = batch[:, i]
            real = ~(h.is_dummy[i] | g.is_dummy[col])
            sim += np.where(real, scores.values[i, col], 0.0)
        vals = lam * lit.conserved(batch) + (1.0 - lam) * sim
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best = float(vals[k]), batch[k]
    return Matching(best, {"solver": "oracle"}), best_val


def chain_mp_oracle(cg, budget: OracleBudget = OracleBudget()) -> tuple[int, Matching | None]:
    """Exhaustive maximum conserved count over every combination of local matchings."""
    if cg.num_clusters == 0:
        return 0, None
    spaces = [list(itertools.permutations(range(len(hm)))) for hm in cg.h_members]
    total = math.prod(len(s) for s in spaces)
    if total > budget.max_states:
        raise BudgetExceededError(f"{total} joint states exceed budget {budget.max_states}")
    lit = _Literal(cg.g, cg.h, cg.mode)
    n = cg.g.num_vertices
    base = np.full(n, -1, dtype=np.int64)
    for hi, gi in cg.pinned:
        base[hi] = gi
    best_val, best = -1, None
    combos = itertools.product(*spaces)
    while True:
        chunk = list(itertools.islice(combos, _BATCH))
        if not chunk:
            break
        perms = np.tile(base, (len(chunk), 1))
        for r, combo in enumerate(chunk):
            for c, local in enumerate(combo):
                perms[r, cg.h_members[c]] = cg.g_members[c][list(local)]
        vals = lit.conserved(perms)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best = int(vals[k]), perms[k]
    return best_val, Matching(best)


def isorank_operator_literal(r: np.ndarray, g: Graph, h: Graph) -> np.ndarray:
    """Quadruple loop over ``i, j`` and neighbour pairs ``v in N_G(i)``, ``u in N_H(j)``."""
    adj_g = [set() for _ in range(g.num_vertices)]
    adj_h = [set() for _ in range(h.num_vertices)]
    for a, b in g.edges.tolist():
        adj_g[a].add(b)
        adj_g[b].add(a)
    for a, b in h.edges.tolist():
        adj_h[a].add(b)
        adj_h[b].add(a)
    out = np.zeros((g.num_vertices, h.num_vertices))
    for i in range(g.num_vertices):
        for j in range(h.num_vertices):
            total = 0.0
            for v in adj_g[i]:
                for u in adj_h[j]:
                    total += r[v, u] / (len(adj_h[u]) * len(adj_g[v]))
            out[i, j] = total
    return out


def gibbs_stationary_marginals(model, budget: OracleBudget = OracleBudget(),
                               tol: float = 1e-13, max_sweeps: int = 100_000) -> np.ndarray:
    """Exact ``P(z = 1)`` under the stationary law of one systematic-scan sweep.

    The distribution over the ``2^k`` free-variable states is pushed through
    each single-site update in scan order until it stops changing.
    """
    free = np.flatnonzero(model.clamp == -1)
    k = free.size
    out = np.where(model.clamp == -1, 0.0, model.clamp).astype(np.float64)
    if k == 0:
        return out
    n_states = 1 << k
    if n_states > budget.max_states:
        raise BudgetExceededError(f"2^{k} states exceed budget {budget.max_states}")
    states = (np.arange(n_states)[:, None] >> np.arange(k)[None, :]) & 1
    fixed = np.where(model.clamp == -1, 0, model.clamp)
    full = np.tile(fixed, (n_states, 1))
    full[:, free] = states

    updates = []
    for bit, v in enumerate(free):
        s = full[:, model.neighbors[v]].sum(axis=1)
        p1 = 1.0 / (1.0 + np.exp(-model.alpha - model.beta * s))
        lo = np.flatnonzero(states[:, bit] == 0)
        updates.append((lo, lo | (1 << bit), p1[lo]))

    dist = np.full(n_states, 1.0 / n_states)
    for _ in range(max_sweeps):
        prev = dist.copy()
        for lo, hi, p in updates:
            mass = dist[lo] + dist[hi]
            dist[hi] = mass * p
            dist[lo] = mass * (1.0 - p)
        if np.abs(dist - prev).max() < tol:
            break
    out[free] = states.T.astype(np.float64) @ dist
    return out
