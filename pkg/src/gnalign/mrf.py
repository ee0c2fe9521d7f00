"""Binary ortholog-indicator MRF, Gibbs sampling and one-to-one extraction.

One variable per real (H, G) pair inside a cluster. Two variables are
neighbours when one side's pair interacts directly and the other side's
pair interacts or shares a neighbour. Each variable is resampled from
``P(z = 1 | rest) = 1 / (1 + exp(-alpha - beta * #neighbours at 1))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .assignment import solve_lap_max
from .clusters import ClusterGraph
from .matching import Matching

DEFAULT_ALPHA = 0.51
DEFAULT_BETA = -6.87

FREE = -1


def conditional_probability(alpha: float, beta: float, active_neighbors) -> float | np.ndarray:
    return 1.0 / (1.0 + np.exp(-alpha - beta * np.asarray(active_neighbors, dtype=np.float64)))


@dataclass
class MrfModel:
    var_h: np.ndarray
    var_g: np.ndarray
    var_cluster: np.ndarray
    clamp: np.ndarray  # FREE, 0 or 1
    neighbors: list[np.ndarray]
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    cluster_graph: ClusterGraph | None = None

    @property
    def num_variables(self) -> int:
        return len(self.var_h)

    @property
    def free(self) -> np.ndarray:
        return np.flatnonzero(self.clamp == FREE)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(a, int(b)) for a, nb in enumerate(self.neighbors) for b in nb if a < b}


def build_mrf(cg: ClusterGraph, alpha: float = DEFAULT_ALPHA,
              beta: float = DEFAULT_BETA) -> MrfModel:
    """Variables for every real within-cluster pair of ``cg``.

    Clusters holding exactly one real vertex per side clamp their variable
    to 1; pairs across clusters are not variables at all.
    """
    g, h = cg.g, cg.h
    vh, vg, vc, clamp = [], [], [], []
    for c in range(cg.num_clusters):
        hs = [v for v in cg.h_members[c].tolist() if not h.is_dummy[v]]
        gs = [v for v in cg.g_members[c].tolist() if not g.is_dummy[v]]
        fixed = 1 if len(hs) == 1 and len(gs) == 1 else FREE
        for a in hs:
            for b in gs:
                vh.append(a)
                vg.append(b)
                vc.append(c)
                clamp.append(fixed)
    vh = np.array(vh, dtype=np.int64)
    vg = np.array(vg, dtype=np.int64)
    if len(vh):
        e_h = h.adjacency_matrix()[vh][:, vh].toarray().astype(bool)
        w_h = h.second_order_matrix()[vh][:, vh].toarray().astype(bool)
        e_g = g.adjacency_matrix()[vg][:, vg].toarray().astype(bool)
        w_g = g.second_order_matrix()[vg][:, vg].toarray().astype(bool)
        link = (e_h & w_g) | (w_h & e_g)
        np.fill_diagonal(link, False)
        neighbors = [np.flatnonzero(row) for row in link]
    else:
        neighbors = []
    return MrfModel(vh, vg, np.array(vc, dtype=np.int64), np.array(clamp, dtype=np.int64),
                    neighbors, alpha, beta, cg)


def gibbs_sample(model: MrfModel, burn_in: int = 1000, samples: int = 10000,
                 seed: int | None = 0) -> np.ndarray:
    """Estimate ``P(z = 1)`` per variable by systematic-scan Gibbs sampling.

    Free variables start uniformly at random and are updated in index order
    each sweep; the state after every post-burn-in sweep is one sample.
    Clamped variables report their clamp value exactly.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    rng = np.random.default_rng(seed)
    z = np.where(model.clamp == FREE, 0, model.clamp).astype(np.int64)
    free = model.free
    if free.size == 0:
        return z.astype(np.float64)
    z[free] = rng.integers(0, 2, size=free.size)

    state = z.tolist()
    nbrs = [model.neighbors[v].tolist() for v in free.tolist()]
    tables = [expit(model.alpha + model.beta * np.arange(len(nb) + 1)).tolist() for nb in nbrs]
    order = free.tolist()
    counts = [0] * len(order)
    for sweep in range(burn_in + samples):
        draws = rng.random(len(order)).tolist()
        for k, v in enumerate(order):
            s = 0
            for w in nbrs[k]:
                s += state[w]
            state[v] = 1 if draws[k] < tables[k][s] else 0
        if sweep >= burn_in:
            for k, v in enumerate(order):
                counts[k] += state[v]

    out = np.where(model.clamp == FREE, 0.0, model.clamp).astype(np.float64)
    out[free] = np.array(counts, dtype=np.float64) / samples
    return out


def mrf_extract_alignment(model: MrfModel, marginals: np.ndarray) -> Matching:
    """Per cluster, the one-to-one local matching with the largest summed marginal."""
    cg = model.cluster_graph
    if cg is None:
        raise ValueError("model has no cluster graph attached")
    marginals = np.asarray(marginals, dtype=np.float64)
    local = []
    for c in range(cg.num_clusters):
        k = cg.side_size(c)
        hpos = {int(v): i for i, v in enumerate(cg.h_members[c])}
        gpos = {int(v): i for i, v in enumerate(cg.g_members[c])}
        w = np.zeros((k, k))
        for var in np.flatnonzero(model.var_cluster == c):
            w[hpos[int(model.var_h[var])], gpos[int(model.var_g[var])]] = marginals[var]
        m, _ = solve_lap_max(w)
        local.append(m.map_h_to_g)
    matching = cg.assemble(local)
    matching.provenance.update({"solver": "mrf", "alpha": model.alpha, "beta": model.beta})
    return matching
