"""Vertex partitions into clusters and the graph of clusters.

Building a cluster graph also builds the padded problem it lives in: each
cluster is padded with dummy vertices to equal side sizes, and every
unclustered vertex is pinned to a private dummy partner so it stays out of
the alignment. Two clusters are joined when some H-pair and some G-pair
between them could together form a conserved interaction under the mode.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
import scipy.sparse as sp

from .exceptions import CapExceededError, ParseError
from .graph import DUMMY_PREFIX, ConservationMode, Graph
from .matching import Matching, ScoreMatrix

DEFAULT_MAX_SIDE = 8


@dataclass
class Partition:
    """Cluster id -> (G labels, H labels), in file order."""

    clusters: dict[str, tuple[list[str], list[str]]] = field(default_factory=dict)

    def add(self, cluster_id: str, side: str, label: str):
        g_side, h_side = self.clusters.setdefault(str(cluster_id), ([], []))
        (g_side if side == "G" else h_side).append(label)

    def ordered_ids(self) -> list[str]:
        return sorted(self.clusters, key=_id_key)

    def __len__(self):
        return len(self.clusters)


def _id_key(cid: str):
    return (0, int(cid), "") if cid.isdigit() else (1, 0, cid)


def load_partition(stream: TextIO | str, source: str | None = None) -> Partition:
    """Read ``cluster_id<TAB>side<TAB>label`` lines, side being ``G`` or ``H``."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    part = Partition()
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 3:
            raise ParseError(f"expected 3 fields, got {len(tok)}", lineno, source)
        if tok[1] not in ("G", "H"):
            raise ParseError(f"side must be G or H, got {tok[1]!r}", lineno, source)
        part.add(tok[0], tok[1], tok[2])
    return part


def write_partition(partition: Partition, stream: TextIO) -> None:
    for cid in partition.ordered_ids():
        g_side, h_side = partition.clusters[cid]
        for lab in g_side:
            stream.write(f"{cid}\tG\t{lab}\n")
        for lab in h_side:
            stream.write(f"{cid}\tH\t{lab}\n")


@dataclass
class ClusterGraph:
    """Clusters over padded graphs plus cluster-level edges.

    ``g_members[c][k]`` and ``h_members[c][k]`` index into ``g`` and ``h``
    (the padded graphs). A local matching of cluster ``c`` is an array ``p``
    sending H-local position ``k`` to G-local position ``p[k]``.
    """

    ids: list[str]
    g_members: list[np.ndarray]
    h_members: list[np.ndarray]
    edges: list[tuple[int, int]]
    g: Graph
    h: Graph
    mode: ConservationMode
    pinned: list[tuple[int, int]]  # (h, g) pairs fixed outside any cluster
    max_side: int = DEFAULT_MAX_SIDE
    _perms: dict = field(default_factory=dict, repr=False)

    @property
    def num_clusters(self) -> int:
        return len(self.ids)

    def side_size(self, c: int) -> int:
        return len(self.h_members[c])

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in self.ids]
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return [sorted(x) for x in nbrs]

    def local_matchings(self, c: int) -> np.ndarray:
        """All local matchings of cluster ``c`` in lexicographic order, shape ``(k!, k)``."""
        k = self.side_size(c)
        if k > self.max_side:
            raise CapExceededError(
                f"cluster {self.ids[c]!r} has side size {k} > cap {self.max_side}")
        if k not in self._perms:
            self._perms[k] = np.array(list(itertools.permutations(range(k))),
                                      dtype=np.int64).reshape(math.factorial(k), k)
        return self._perms[k]

    def allowed(self) -> np.ndarray:
        """``[h, g]`` mask of pairs permitted by the clustering."""
        n = self.g.num_vertices
        a = np.zeros((n, n), dtype=bool)
        for hm, gm in zip(self.h_members, self.g_members):
            a[np.ix_(hm, gm)] = True
        for hi, gi in self.pinned:
            a[hi, gi] = True
        return a

    def constraints(self) -> ScoreMatrix:
        return ScoreMatrix.from_allowed(self.allowed())

    def assemble(self, local: dict[int, np.ndarray] | list[np.ndarray]) -> Matching:
        """Global matching from one local matching per cluster."""
        n = self.g.num_vertices
        out = np.full(n, -1, dtype=np.int64)
        for c in range(self.num_clusters):
            p = np.asarray(local[c], dtype=np.int64)
            out[self.h_members[c]] = self.g_members[c][p]
        for hi, gi in self.pinned:
            out[hi] = gi
        return Matching(out)

    def local_of(self, matching: Matching, c: int) -> np.ndarray:
        """Restriction of a feasible global matching to cluster ``c``."""
        pos = {int(gv): k for k, gv in enumerate(self.g_members[c])}
        return np.array([pos[int(matching[hv])] for hv in self.h_members[c]], dtype=np.int64)


def _cross_pairs(mat: sp.spmatrix, label: np.ndarray) -> set[tuple[int, int]]:
    m = sp.triu(mat, k=1).tocoo()
    a, b = label[m.row], label[m.col]
    keep = (a >= 0) & (b >= 0) & (a != b)
    lo, hi = np.minimum(a[keep], b[keep]), np.maximum(a[keep], b[keep])
    return set(zip(lo.tolist(), hi.tolist()))


def build_cluster_graph(partition: Partition, g: Graph, h: Graph,
                        mode: ConservationMode | str = ConservationMode.STRICT,
                        max_side: int = DEFAULT_MAX_SIDE) -> ClusterGraph:
    """Pad ``g`` and ``h`` per cluster and connect clusters that can share a
    conserved interaction. ``g`` and ``h`` must not contain dummies yet.
    """
    mode = ConservationMode.coerce(mode)
    if g.is_dummy.any() or h.is_dummy.any():
        raise ValueError("build_cluster_graph expects unpadded graphs")
    ids = partition.ordered_ids()
    g_owner = np.full(g.num_vertices, -1, dtype=np.int64)
    h_owner = np.full(h.num_vertices, -1, dtype=np.int64)
    g_real, h_real = [], []
    for c, cid in enumerate(ids):
        g_side, h_side = partition.clusters[cid]
        for labels, graph, owner, store, side in ((g_side, g, g_owner, g_real, "G"),
                                                  (h_side, h, h_owner, h_real, "H")):
            idx = []
            for lab in labels:
                try:
                    v = graph.index(lab)
                except KeyError:
                    raise ParseError(f"cluster {cid!r}: unknown {side} label {lab!r}") from None
                if owner[v] >= 0:
                    raise ParseError(f"{side} vertex {lab!r} listed in clusters "
                                     f"{ids[owner[v]]!r} and {cid!r}")
                owner[v] = c
                idx.append(v)
            store.append(idx)

    g_labels, h_labels = list(g.labels), list(h.labels)
    g_members, h_members = [], []

    def new_dummy(labels):
        labels.append(f"{DUMMY_PREFIX}{len(labels)}")
        return len(labels) - 1

    for gi, hi in zip(g_real, h_real):
        k = max(len(gi), len(hi))
        gm = list(gi) + [new_dummy(g_labels) for _ in range(k - len(gi))]
        hm = list(hi) + [new_dummy(h_labels) for _ in range(k - len(hi))]
        g_members.append(np.array(gm, dtype=np.int64))
        h_members.append(np.array(hm, dtype=np.int64))
    pinned = []
    for v in np.flatnonzero(g_owner < 0).tolist():
        pinned.append((new_dummy(h_labels), v))
    for v in np.flatnonzero(h_owner < 0).tolist():
        pinned.append((v, new_dummy(g_labels)))
    assert len(g_labels) == len(h_labels)

    gp = Graph(g_labels, g.edges, is_dummy=[i >= g.num_vertices for i in range(len(g_labels))])
    hp = Graph(h_labels, h.edges, is_dummy=[i >= h.num_vertices for i in range(len(h_labels))])

    e_h = _cross_pairs(h.adjacency_matrix(), h_owner)
    e_g = _cross_pairs(g.adjacency_matrix(), g_owner)
    if mode is ConservationMode.STRICT:
        edges = e_h & e_g
    else:
        w_h = _cross_pairs(h.second_order_matrix(), h_owner)
        w_g = _cross_pairs(g.second_order_matrix(), g_owner)
        if mode is ConservationMode.SECOND_ORDER_ASYM:
            edges = (e_h & w_g) | (w_h & e_g)
        else:
            edges = w_h & w_g
    return ClusterGraph(ids=ids, g_members=g_members, h_members=h_members,
                        edges=sorted(edges), g=gp, h=hp, mode=mode, pinned=pinned,
                        max_side=max_side)
