"""IsoRank-style spectral scores and their extraction to a matching.

``R`` is indexed ``[g, h]``. One application of the neighbourhood operator
is ``R'(i, j) = sum_{v in N_G(i)} sum_{u in N_H(j)} R(v, u) / (|N(v)| |N(u)|)``,
evaluated as ``A_G (D_G^-1 R D_H^-1) A_H`` with sparse products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import solve_lap_max
from .graph import Graph
from .matching import Matching, ScoreMatrix


def _inv_degree(graph: Graph) -> np.ndarray:
    d = graph.degree().astype(np.float64)
    out = np.zeros_like(d)
    np.divide(1.0, d, out=out, where=d > 0)
    return out


def isorank_operator_apply(r: np.ndarray, g: Graph, h: Graph) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (g.num_vertices, h.num_vertices):
        raise ValueError(f"R has shape {r.shape}, expected {(g.num_vertices, h.num_vertices)}")
    scaled = (_inv_degree(g)[:, None] * r) * _inv_degree(h)[None, :]
    a_g = g.adjacency_matrix().astype(np.float64)
    a_h = h.adjacency_matrix().astype(np.float64)
    # (A_H^T (A_G S)^T)^T == A_G S A_H; both products are sparse @ dense
    return np.asarray((a_h @ np.asarray(a_g @ scaled).T).T)


def _unit(x: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(x)
    return x / nrm if nrm > 0 else x


@dataclass
class IsoRankResult:
    scores: np.ndarray
    converged: bool
    n_iter: int
    deltas: list[float]
    metadata: dict = field(default_factory=dict)


def isorank_scores(g: Graph, h: Graph, similarity: ScoreMatrix | np.ndarray | None = None,
                   lam: float = 0.5, tol: float = 1e-9, max_iters: int = 100) -> IsoRankResult:
    """Power iteration ``R <- normalise(lam * op(R) + (1 - lam) * C_hat)``.

    ``similarity`` is oriented ``[h, g]`` like every ScoreMatrix and is
    transposed internally; forbidden entries count as 0, negative scores
    are shifted up by the minimum. Starts from the uniform unit matrix and
    stops when the largest entry change falls below ``tol``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    ng, nh = g.num_vertices, h.num_vertices
    shift = 0.0
    if similarity is None:
        c = np.zeros((ng, nh))
    else:
        if isinstance(similarity, ScoreMatrix):
            vals, allowed = similarity.values, similarity.allowed
        else:
            vals = np.asarray(similarity, dtype=np.float64)
            allowed = np.isfinite(vals)
        if vals.shape != (nh, ng):
            raise ValueError(f"similarity has shape {vals.shape}, expected {(nh, ng)}")
        c = np.where(allowed, vals, 0.0).T.copy()
        lo = c[allowed.T].min() if allowed.any() else 0.0
        if lo < 0:
            shift = -lo
            c[allowed.T] += shift
    c_hat = _unit(c)

    r = _unit(np.ones((ng, nh)))
    deltas = []
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        nxt = _unit(lam * isorank_operator_apply(r, g, h) + (1.0 - lam) * c_hat)
        delta = float(np.abs(nxt - r).max()) if nxt.size else 0.0
        deltas.append(delta)
        r = nxt
        if delta < tol:
            converged = True
            break
    meta = {"norm": "frobenius", "similarity_shift": shift, "init": "uniform",
            "lambda": lam, "tol": tol, "max_iters": max_iters}
    return IsoRankResult(r, converged, it, deltas, meta)


def isorank_align(r: np.ndarray, constraints: ScoreMatrix | np.ndarray | None = None) -> Matching:
    """Maximum-weight one-to-one extraction from ``R[g, h]``, optionally masked.

    ``constraints`` is an ``[h, g]`` ScoreMatrix (its ``allowed`` mask is
    used) or boolean mask. ``R`` is padded with zeros to a square.
    """
    r = np.asarray(r, dtype=np.float64)
    n = max(r.shape)
    w = np.zeros((n, n))
    w[:r.shape[1], :r.shape[0]] = r.T
    allowed = None
    if constraints is not None:
        mask = constraints.allowed if isinstance(constraints, ScoreMatrix) else np.asarray(constraints, bool)
        allowed = np.ones((n, n), dtype=bool)
        allowed[:mask.shape[0], :mask.shape[1]] = mask
    m, _ = solve_lap_max(w, allowed)
    return Matching(m.map_h_to_g, {"solver": "isorank"})
