"""Exact constrained alignment by max-sum message passing on a tree of clusters.

The conserved count splits into within-cluster terms ``j1`` and terms
``j2`` for pairs straddling two joined clusters. On a forest of clusters,
a leaves-to-root pass computes for each cluster and local matching the
best achievable score of its subtree, and a root-to-leaves pass reads the
maximisers back.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .clusters import ClusterGraph
from .exceptions import NotATreeError
from .matching import Matching
from .objective import MODE_TERMS, structure_matrix

_CHUNK = 1 << 22


def _blocks(cg: ClusterGraph, a: int, b: int):
    """Dense (coef, H-block, G-block) per conservation term for clusters ``a``, ``b``."""
    out = []
    for coef, kh, kg in MODE_TERMS[cg.mode]:
        mh = structure_matrix(cg.h, kh)
        mg = structure_matrix(cg.g, kg)
        hb = mh[cg.h_members[a]][:, cg.h_members[b]].toarray()
        gb = mg[cg.g_members[a]][:, cg.g_members[b]].toarray()
        out.append((coef, hb, gb))
    return out


def _check_local(cg: ClusterGraph, c: int, p) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    k = cg.side_size(c)
    if p.shape != (k,) or sorted(p.tolist()) != list(range(k)):
        raise ValueError(f"{p.tolist()} is not a local matching of cluster {cg.ids[c]!r}")
    return p


def j1(cg: ClusterGraph, c: int, p) -> int:
    """Conserved pairs with both H-endpoints in cluster ``c``."""
    p = _check_local(cg, c, p)
    return int(j1_table(cg, c, p[None, :])[0])


def j2(cg: ClusterGraph, a: int, p, b: int, q) -> int:
    """Conserved pairs with one H-endpoint in cluster ``a`` and one in ``b``."""
    p = _check_local(cg, a, p)
    q = _check_local(cg, b, q)
    return int(j2_table(cg, a, p[None, :], b, q[None, :])[0, 0])


def j1_table(cg: ClusterGraph, c: int, perms: np.ndarray | None = None) -> np.ndarray:
    perms = cg.local_matchings(c) if perms is None else perms
    out = np.zeros(len(perms), dtype=np.int64)
    for coef, hb, gb in _blocks(cg, c, c):
        for i, j in zip(*np.nonzero(np.triu(hb, k=1))):
            out += coef * gb[perms[:, i], perms[:, j]]
    return out


def j2_table(cg: ClusterGraph, a: int, pa: np.ndarray | None, b: int,
             pb: np.ndarray | None) -> np.ndarray:
    pa = cg.local_matchings(a) if pa is None else pa
    pb = cg.local_matchings(b) if pb is None else pb
    out = np.zeros((len(pa), len(pb)), dtype=np.int64)
    for coef, hb, gb in _blocks(cg, a, b):
        for i, j in zip(*np.nonzero(hb)):
            out += coef * gb[np.ix_(pa[:, i], pb[:, j])]
    return out


@dataclass
class MpResult:
    matching: Matching
    value: int
    local: list[np.ndarray]
    roots: list[int]


def components(cg: ClusterGraph) -> list[list[int]]:
    nbrs = cg.neighbors()
    seen = np.zeros(cg.num_clusters, dtype=bool)
    comps = []
    for s in range(cg.num_clusters):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            c = stack.pop()
            comp.append(c)
            for d in nbrs[c]:
                if not seen[d]:
                    seen[d] = True
                    stack.append(d)
        comps.append(sorted(comp))
    return comps


def check_forest(cg: ClusterGraph) -> list[list[int]]:
    """Connected components of the cluster graph; NotATreeError on a cycle."""
    comps = components(cg)
    where = np.empty(cg.num_clusters, dtype=np.int64)
    for k, comp in enumerate(comps):
        where[comp] = k
    n_edges = np.zeros(len(comps), dtype=np.int64)
    for a, _ in cg.edges:
        n_edges[where[a]] += 1
    for k, comp in enumerate(comps):
        if n_edges[k] != len(comp) - 1:
            raise NotATreeError([cg.ids[c] for c in comp])
    return comps


def _best_child(u_child: np.ndarray, table: np.ndarray):
    tot = table + u_child[None, :]
    arg = np.argmax(tot, axis=1)
    return tot[np.arange(len(tot)), arg], arg


def mp_align(cg: ClusterGraph, roots=None) -> MpResult:
    """Globally optimal conserved count over matchings allowed by the clustering.

    Each connected component must be a tree. Its root is the lowest-index
    cluster unless one of ``roots`` (cluster indices) lies in it. Equal
    scores resolve to the lexicographically smallest local matching.
    """
    comps = check_forest(cg)
    nbrs = cg.neighbors()
    prefer = set(roots or ())
    local: list[np.ndarray | None] = [None] * cg.num_clusters
    total = 0
    used_roots = []
    for comp in comps:
        root = next((c for c in comp if c in prefer), comp[0])
        used_roots.append(root)
        parent = {root: -1}
        order = []
        queue = deque([root])
        while queue:
            c = queue.popleft()
            order.append(c)
            for d in nbrs[c]:
                if d not in parent:
                    parent[d] = c
                    queue.append(d)

        u = {}
        back = {}
        for c in reversed(order):
            u_c = j1_table(cg, c).astype(np.int64)
            pc = cg.local_matchings(c)
            for d in nbrs[c]:
                if parent.get(d) != c:
                    continue
                pd = cg.local_matchings(d)
                step = max(1, _CHUNK // max(1, len(pd)))
                best_val = np.empty(len(pc), dtype=np.int64)
                best_arg = np.empty(len(pc), dtype=np.int64)
                for s in range(0, len(pc), step):
                    table = j2_table(cg, c, pc[s:s + step], d, pd)
                    best_val[s:s + step], best_arg[s:s + step] = _best_child(u[d], table)
                u_c = u_c + best_val
                back[d] = best_arg
            u[c] = u_c

        choice = {root: int(np.argmax(u[root]))}
        total += int(u[root][choice[root]])
        for c in order[1:]:
            choice[c] = int(back[c][choice[parent[c]]])
        for c in comp:
            local[c] = cg.local_matchings(c)[choice[c]].copy()

    matching = cg.assemble(local)
    matching.provenance.update({"solver": "mp", "mode": cg.mode.value})
    return MpResult(matching, total, local, used_roots)
