"""Maximum-weight perfect bipartite matching with forbidden pairs.

Shortest augmenting path form of the Hungarian method with row and column
potentials, O(n^3). Rows are inserted in index order and the scan over
columns always takes the lowest column index among equal reduced costs,
so the result is a deterministic function of the input.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InfeasibleError
from .matching import Matching, ScoreMatrix


def _as_problem(weights, allowed):
    if isinstance(weights, ScoreMatrix):
        w = weights.values
        a = weights.allowed if allowed is None else (weights.allowed & np.asarray(allowed, bool))
    else:
        w = np.asarray(weights, dtype=np.float64)
        a = np.isfinite(w) if allowed is None else np.asarray(allowed, dtype=bool) & np.isfinite(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"assignment problem must be square, got shape {w.shape}")
    return w, a


def solve_lap_max(weights, allowed=None) -> tuple[Matching, float]:
    """Return the allowed bijection of maximum total weight and that weight.

    ``weights`` is a ScoreMatrix or a square array (non-finite entries are
    forbidden). ``allowed`` further restricts the usable pairs. Raises
    InfeasibleError naming a Hall's-condition violating row set when no
    perfect matching uses only allowed pairs.
    """
    w, a = _as_problem(weights, allowed)
    n = w.shape[0]
    if n == 0:
        return Matching([], {"solver": "lap"}), 0.0

    cost = np.where(a, -w, np.inf)
    # index n is a virtual column that roots each alternating tree
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    col_owner = np.full(n + 1, -1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for row in range(n):
        col_owner[n] = row
        j0 = n
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = col_owner[j0]
            cur = cost[i0] - u[i0] - v[:n]
            free = ~used[:n]
            better = free & (cur < minv[:n])
            minv[:n][better] = cur[better]
            way[:n][better] = j0
            masked = np.where(free, minv[:n], np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            if not np.isfinite(delta):
                tree_rows = set(col_owner[np.flatnonzero(used)].tolist())
                raise InfeasibleError("no perfect matching over allowed pairs", rows=tree_rows)
            owners = col_owner[np.flatnonzero(used)]
            u[owners] += delta
            v[used] -= delta
            minv[:n][free] -= delta
            j0 = j1
            if col_owner[j0] == -1:
                break
        while j0 != n:
            j1 = way[j0]
            col_owner[j0] = col_owner[j1]
            j0 = j1

    h_to_g = np.empty(n, dtype=np.int64)
    h_to_g[col_owner[:n]] = np.arange(n)
    value = float(w[np.arange(n), h_to_g].sum())
    return Matching(h_to_g, {"solver": "lap"}), value
