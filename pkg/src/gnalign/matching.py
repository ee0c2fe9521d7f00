"""One-to-one matchings and pair-score matrices with forbidden entries."""

from __future__ import annotations

import io
from typing import TextIO

import numpy as np

from .exceptions import ParseError
from .graph import Graph


class Matching:
    """Bijection from H-vertices to G-vertices: ``map_h_to_g[i]`` is the
    G-vertex matched to H-vertex ``i``.
    """

    def __init__(self, map_h_to_g, provenance: dict | None = None):
        m = np.array(map_h_to_g, dtype=np.int64).ravel()
        n = m.size
        if n and (m.min() < 0 or m.max() >= n or np.unique(m).size != n):
            raise ValueError("map_h_to_g is not a permutation of 0..n-1")
        m.setflags(write=False)
        self._map = m
        self.provenance = dict(provenance or {})

    @classmethod
    def identity(cls, n: int, provenance=None) -> "Matching":
        return cls(np.arange(n), provenance)

    @property
    def map_h_to_g(self) -> np.ndarray:
        return self._map

    @property
    def size(self) -> int:
        return self._map.size

    def __len__(self):
        return self._map.size

    def __getitem__(self, i):
        return int(self._map[i])

    def inverse(self) -> "Matching":
        inv = np.empty_like(self._map)
        inv[self._map] = np.arange(self._map.size)
        return Matching(inv, self.provenance)

    def to_matrix(self) -> np.ndarray:
        """Permutation matrix ``P`` with ``P[h, g] = 1`` iff ``h`` is matched to ``g``."""
        p = np.zeros((self.size, self.size), dtype=np.int64)
        p[np.arange(self.size), self._map] = 1
        return p

    def key(self) -> bytes:
        return self._map.tobytes()

    def pairs(self, g: Graph | None = None, h: Graph | None = None,
              include_dummy: bool = False) -> list[tuple[int, int]]:
        """``(h, g)`` index pairs, real pairs only unless ``include_dummy``."""
        out = []
        for hi, gi in enumerate(self._map.tolist()):
            if not include_dummy and (
                    (h is not None and h.is_dummy[hi]) or (g is not None and g.is_dummy[gi])):
                continue
            out.append((hi, gi))
        return out

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return np.array_equal(self._map, other._map)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.size <= 12:
            return f"Matching({self._map.tolist()})"
        return f"Matching(size={self.size})"


class ScoreMatrix:
    """Similarity between H-vertices (rows) and G-vertices (columns).

    Forbidden pairs are tracked by a boolean mask, never by a sentinel
    number. ``values`` is 0 wherever a pair is forbidden.
    """

    def __init__(self, values, allowed=None, constrained: bool = False):
        v = np.array(values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("score matrix must be 2-D")
        if allowed is None:
            a = np.isfinite(v)
        else:
            a = np.array(allowed, dtype=bool)
            if a.shape != v.shape:
                raise ValueError("allowed mask shape differs from values")
            a &= np.isfinite(v)
        if np.any(np.isnan(v[a])):
            raise ValueError("NaN score")
        v[~a] = 0.0
        v.setflags(write=False)
        a.setflags(write=False)
        self.values = v
        self.allowed = a
        self.constrained = constrained

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> "ScoreMatrix":
        return cls(np.zeros((n_rows, n_rows if n_cols is None else n_cols)))

    @classmethod
    def from_allowed(cls, allowed) -> "ScoreMatrix":
        """Constrained-GNA matrix: score 0 on allowed pairs, forbidden elsewhere."""
        a = np.asarray(allowed, dtype=bool)
        return cls(np.zeros(a.shape), a, constrained=True)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def fully_allowed(self) -> bool:
        return bool(self.allowed.all())

    def is_forbidden(self, h: int, g: int) -> bool:
        return not self.allowed[h, g]

    def masked(self) -> np.ndarray:
        """Values with forbidden entries set to ``-inf`` (for display and oracles)."""
        out = self.values.copy()
        out[~self.allowed] = -np.inf
        return out

    def with_allowed(self, allowed) -> "ScoreMatrix":
        return ScoreMatrix(self.values, self.allowed & np.asarray(allowed, dtype=bool),
                           constrained=True)

    def padded(self, n: int) -> "ScoreMatrix":
        """Extend to ``n x n``; pairs touching an added (dummy) row or column
        are allowed with score 0.
        """
        r, c = self.shape
        if n < r or n < c:
            raise ValueError("cannot pad to a smaller size")
        v = np.zeros((n, n))
        a = np.ones((n, n), dtype=bool)
        v[:r, :c] = self.values
        a[:r, :c] = self.allowed
        return ScoreMatrix(v, a, constrained=self.constrained)

    def __repr__(self):
        return (f"ScoreMatrix(shape={self.shape}, constrained={self.constrained}, "
                f"forbidden={int((~self.allowed).sum())})")


def is_feasible(matching: Matching, scores: ScoreMatrix) -> bool:
    """True iff every matched pair is allowed by ``scores``."""
    n = matching.size
    if scores.shape != (n, n):
        raise ValueError(f"size mismatch: matching {n}, scores {scores.shape}")
    return bool(scores.allowed[np.arange(n), matching.map_h_to_g].all())


def permute_graph(matching: Matching, h: Graph) -> Graph:
    """Relabel H so that vertex ``i`` becomes vertex ``map_h_to_g[i]``."""
    n = matching.size
    if h.num_vertices != n:
        raise ValueError(f"size mismatch: matching {n}, graph {h.num_vertices}")
    pi = matching.map_h_to_g
    labels = [None] * n
    dummy = np.empty(n, dtype=bool)
    for i in range(n):
        labels[pi[i]] = h.labels[i]
        dummy[pi[i]] = h.is_dummy[i]
    e = h.edges
    return Graph(labels, np.column_stack([pi[e[:, 0]], pi[e[:, 1]]]) if len(e) else (),
                 is_dummy=dummy)


def load_similarity(stream: TextIO | str, g: Graph, h: Graph, constrained: bool = False,
                    default: float = 0.0, source: str | None = None,
                    size: int | None = None) -> ScoreMatrix:
    """Read ``h_label<TAB>g_label<TAB>score`` triplets.

    Unlisted real pairs are forbidden when ``constrained`` and ``default``
    otherwise. Pairs touching a dummy vertex are always allowed with score 0.
    Labels unknown to either graph raise ParseError.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    n_h, n_g = (h.num_vertices, g.num_vertices) if size is None else (size, size)
    v = np.full((n_h, n_g), 0.0 if constrained else float(default))
    a = np.full((n_h, n_g), not constrained, dtype=bool)
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 3:
            raise ParseError(f"expected 3 fields, got {len(tok)}", lineno, source)
        try:
            hi = h.index(tok[0])
        except KeyError:
            raise ParseError(f"unknown H label {tok[0]!r}", lineno, source) from None
        try:
            gi = g.index(tok[1])
        except KeyError:
            raise ParseError(f"unknown G label {tok[1]!r}", lineno, source) from None
        try:
            score = float(tok[2])
        except ValueError:
            raise ParseError(f"bad score {tok[2]!r}", lineno, source) from None
        v[hi, gi] = score
        a[hi, gi] = True
    hd = np.zeros(n_h, dtype=bool)
    hd[:h.num_vertices] = h.is_dummy
    hd[h.num_vertices:] = True
    gd = np.zeros(n_g, dtype=bool)
    gd[:g.num_vertices] = g.is_dummy
    gd[g.num_vertices:] = True
    touch = hd[:, None] | gd[None, :]
    v[touch] = 0.0
    a[touch] = True
    return ScoreMatrix(v, a, constrained=constrained)


def write_similarity(scores: ScoreMatrix, g: Graph, h: Graph, stream: TextIO) -> None:
    """Write allowed real pairs as triplets (inverse of :func:`load_similarity`)."""
    for hi in range(h.num_vertices):
        if h.is_dummy[hi]:
            continue
        for gi in np.flatnonzero(scores.allowed[hi, :g.num_vertices]):
            if g.is_dummy[gi]:
                continue
            stream.write(f"{h.labels[hi]}\t{g.labels[gi]}\t{float(scores.values[hi, gi])!r}\n")
