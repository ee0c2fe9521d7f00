"""Seeded synthetic alignment instances with a planted matching."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .clusters import Partition, write_partition
from .graph import Graph, write_edge_list, write_vertex_universe
from .matching import Matching, ScoreMatrix, write_similarity
from .io import write_alignment


@dataclass(frozen=True)
class ClusterPlan:
    num_clusters: int
    ambiguous_fraction: float = 0.5
    max_side: int = 3
    tree: bool = False  # only draw edges inside clusters and along a random cluster tree

    def __post_init__(self):
        if self.num_clusters < 0:
            raise ValueError("num_clusters must be >= 0")
        if not 0.0 <= self.ambiguous_fraction <= 1.0:
            raise ValueError("ambiguous_fraction must lie in [0, 1]")
        if self.max_side < 1:
            raise ValueError("max_side must be >= 1")


@dataclass(frozen=True)
class SyntheticSpec:
    n: int
    edge_prob: float
    noise: float = 0.0
    seed: int = 0
    cluster_plan: ClusterPlan | None = None
    similarity_signal: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        for name in ("edge_prob", "noise"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.seed is None:
            raise ValueError("seed is required")


@dataclass
class SyntheticInstance:
    g: Graph
    h: Graph
    scores: ScoreMatrix
    planted: Matching
    partition: Partition | None = None


def expected_planted_conserved(m: int, n: int, noise: float) -> float:
    """Mean strict conserved count of the planted matching after rewiring.

    ``k = round(noise * m)`` copied edges are deleted, then ``k`` new edges
    are drawn uniformly from the ``M - m + k`` vertex pairs absent at that
    point, ``k`` of which are images of G-edges.
    """
    total = n * (n - 1) // 2
    k = int(round(noise * m))
    if k == 0:
        return float(m)
    return (m - k) + k * k / (total - m + k)


def _plan_clusters(plan: ClusterPlan, n: int, rng) -> list[np.ndarray]:
    sizes = []
    for _ in range(plan.num_clusters):
        if plan.max_side >= 2 and rng.random() < plan.ambiguous_fraction:
            sizes.append(int(rng.integers(2, plan.max_side + 1)))
        else:
            sizes.append(1)
    if sum(sizes) > n:
        raise ValueError(f"infeasible cluster plan: {sum(sizes)} clustered vertices > n={n}")
    order = rng.permutation(n)
    out, pos = [], 0
    for s in sizes:
        out.append(np.sort(order[pos:pos + s]))
        pos += s
    return out


def _er_edges(n: int, p: float, rng) -> np.ndarray:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return np.column_stack([iu[keep], ju[keep]])


def _tree_edges(groups: list[np.ndarray], p: float, rng) -> np.ndarray:
    edges = []
    for grp in groups:
        for a in range(len(grp)):
            for b in range(a + 1, len(grp)):
                if rng.random() < p:
                    edges.append((grp[a], grp[b]))
    order = rng.permutation(len(groups))
    for pos in range(1, len(order)):
        child = groups[order[pos]]
        parent = groups[order[int(rng.integers(0, pos))]]
        for a in child:
            for b in parent:
                if rng.random() < p:
                    edges.append((min(a, b), max(a, b)))
    return np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)


def synth_generate(spec: SyntheticSpec) -> SyntheticInstance:
    """G is Erdos-Renyi (or tree-of-clusters); H is a relabelled copy of G
    with a ``noise`` fraction of edges rewired; similarity is uniform noise
    plus ``similarity_signal`` on planted pairs.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    planted = rng.permutation(n)  # H vertex i <-> G vertex planted[i]
    inv = np.argsort(planted)

    groups = None
    if spec.cluster_plan is not None:
        groups = _plan_clusters(spec.cluster_plan, n, rng)
    if groups is not None and spec.cluster_plan.tree:
        g_edges = _tree_edges(groups, spec.edge_prob, rng)
    else:
        g_edges = _er_edges(n, spec.edge_prob, rng)

    h_edges = {tuple(sorted((int(inv[a]), int(inv[b])))) for a, b in g_edges.tolist()}
    k = int(round(spec.noise * len(h_edges)))
    if k:
        current = sorted(h_edges)
        drop = rng.choice(len(current), size=k, replace=False)
        for idx in sorted(drop.tolist()):
            h_edges.discard(current[idx])
        added = 0
        while added < k:
            a, b = rng.integers(0, n, size=2).tolist()
            if a == b:
                continue
            e = (min(a, b), max(a, b))
            if e not in h_edges:
                h_edges.add(e)
                added += 1

    g = Graph([f"g{i}" for i in range(n)], g_edges)
    h = Graph([f"h{i}" for i in range(n)], sorted(h_edges))
    sim = rng.random((n, n))
    sim[np.arange(n), planted] += spec.similarity_signal
    scores = ScoreMatrix(sim)

    partition = None
    if groups is not None:
        partition = Partition()
        for c, grp in enumerate(groups):
            # groups index G; the H side holds the planted partners
            for v in grp.tolist():
                partition.add(str(c), "G", g.labels[v])
            for v in sorted(inv[grp].tolist()):
                partition.add(str(c), "H", h.labels[v])
    return SyntheticInstance(g, h, scores, Matching(planted, {"solver": "planted"}), partition)


def write_instance(inst: SyntheticInstance, outdir: str | Path) -> dict[str, Path]:
    """Write the instance as the text formats the CLI reads; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "g_edges": out / "g.tsv", "h_edges": out / "h.tsv",
        "g_vertices": out / "g.vertices", "h_vertices": out / "h.vertices",
        "sim": out / "sim.tsv", "planted": out / "planted.tsv",
    }
    with open(paths["g_edges"], "w") as f:
        write_edge_list(inst.g, f)
    with open(paths["h_edges"], "w") as f:
        write_edge_list(inst.h, f)
    with open(paths["g_vertices"], "w") as f:
        write_vertex_universe(inst.g, f)
    with open(paths["h_vertices"], "w") as f:
        write_vertex_universe(inst.h, f)
    with open(paths["sim"], "w") as f:
        write_similarity(inst.scores, inst.g, inst.h, f)
    with open(paths["planted"], "w") as f:
        write_alignment(inst.planted, inst.g, inst.h, inst.scores, f)
    if inst.partition is not None:
        paths["clusters"] = out / "clusters.tsv"
        with open(paths["clusters"], "w") as f:
            write_partition(inst.partition, f)
    return paths
