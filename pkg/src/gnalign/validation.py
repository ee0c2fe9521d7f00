"""Input coercion for the estimator API."""

from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp

from .graph import Graph, pad_pair
from .matching import ScoreMatrix


def check_graph(x, name: str = "graph") -> Graph:
    """Accept a Graph, or a square symmetric 0/1 adjacency (dense or sparse)."""
    if isinstance(x, Graph):
        return x
    if sp.issparse(x) or isinstance(x, (np.ndarray, list)):
        m = sp.csr_matrix(x)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"{name}: adjacency must be square, got {m.shape}")
        if (m != m.T).nnz:
            raise ValueError(f"{name}: adjacency must be symmetric")
        if m.diagonal().any():
            raise ValueError(f"{name}: self-loops are not allowed")
        return Graph.from_adjacency(m)
    raise TypeError(f"{name}: expected Graph or adjacency matrix, got {type(x).__name__}")


def check_graph_pair(g, h) -> tuple[Graph, Graph]:
    """Coerce both graphs and pad them with dummies to a common size."""
    return pad_pair(check_graph(g, "G"), check_graph(h, "H"))


def check_scores(scores, n_h: int, n_g: int, size: int | None = None) -> ScoreMatrix:
    """ScoreMatrix of shape ``(n_h, n_g)`` padded to ``size``; ``None`` means all zeros.

    Arrays are read as ``[h, g]`` with non-finite entries forbidden.
    """
    if scores is None:
        s = ScoreMatrix.zeros(n_h, n_g)
    elif isinstance(scores, ScoreMatrix):
        s = scores
    else:
        s = ScoreMatrix(np.asarray(scores, dtype=np.float64))
    if size is not None and s.shape != (size, size):
        if s.shape != (n_h, n_g):
            raise ValueError(f"scores have shape {s.shape}, expected {(n_h, n_g)} "
                             f"or {(size, size)}")
        s = s.padded(size)
    elif size is None and s.shape != (n_h, n_g):
        raise ValueError(f"scores have shape {s.shape}, expected {(n_h, n_g)}")
    return s


def check_lambda(lam) -> float:
    if not isinstance(lam, numbers.Real) or not 0.0 <= float(lam) <= 1.0:
        raise ValueError(f"lam must be a real number in [0, 1], got {lam!r}")
    return float(lam)
