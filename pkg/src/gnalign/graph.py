"""Undirected simple graphs, edge-list ingestion, padding and second-order expansion."""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp

from .exceptions import ParseError

DUMMY_PREFIX = "__dummy__"


class ConservationMode(enum.Enum):
    """Which aligned pairs count as a conserved interaction.

    STRICT: edge in both graphs (case 1).
    SECOND_ORDER_ASYM: edge on one side, edge or common neighbour on the
    other (cases 1-3).
    SECOND_ORDER_SYM: edge or common neighbour on both sides (cases 1-4).
    """

    STRICT = "strict"
    SECOND_ORDER_ASYM = "cases123"
    SECOND_ORDER_SYM = "cases1234"

    @classmethod
    def coerce(cls, value) -> "ConservationMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            pass
        try:
            return cls[str(value).upper()]
        except KeyError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown conservation mode {value!r}; expected one of {choices}") from None


class Graph:
    """Immutable undirected simple graph with labelled vertices.

    Vertices are ``0..num_vertices-1``. Dummy vertices are isolated padding
    vertices labelled ``__dummy__<k>``.
    """

    def __init__(self, labels: Iterable[str], edges: Iterable[tuple[int, int]] = (),
                 is_dummy: Iterable[bool] | None = None):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if is_dummy is None:
            dummy = np.array([lab.startswith(DUMMY_PREFIX) for lab in labels], dtype=bool)
        else:
            dummy = np.array(list(is_dummy), dtype=bool)
            if dummy.shape != (n,):
                raise ValueError("is_dummy length must match labels")
        real = [lab for lab, d in zip(labels, dummy) if not d]
        if len(set(real)) != len(real):
            raise ValueError("vertex labels must be unique")

        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
            if np.any(dummy[e[:, 0]] | dummy[e[:, 1]]):
                raise ValueError("dummy vertices must be isolated")
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0) if e.size else e

        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        adj = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        adj.sort_indices()

        self._labels = labels
        self._dummy = dummy
        self._dummy.setflags(write=False)
        self._edges = e
        self._edges.setflags(write=False)
        self._adj = adj
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._second_order = None

    @property
    def num_vertices(self) -> int:
        return len(self._labels)

    def __len__(self):
        return len(self._labels)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def is_dummy(self) -> np.ndarray:
        return self._dummy

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def num_real(self) -> int:
        return int((~self._dummy).sum())

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``(i, j)`` with ``i < j``, sorted."""
        return self._edges

    @property
    def adjacency(self) -> list[list[int]]:
        a = self._adj
        return [a.indices[a.indptr[i]:a.indptr[i + 1]].tolist() for i in range(len(self))]

    def neighbors(self, i: int) -> np.ndarray:
        a = self._adj
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self._adj.indptr)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def index(self, label: str) -> int:
        return self._index[label]

    def adjacency_matrix(self, dense: bool = False):
        """Symmetric 0/1 adjacency; CSR by default."""
        if dense:
            return self._adj.toarray().astype(np.int64)
        return self._adj.copy()

    def second_order_matrix(self) -> sp.csr_matrix:
        """0/1 matrix of pairs that are adjacent or share a neighbour (cached)."""
        if self._second_order is None:
            self._second_order = _common_neighbor_matrix(self._adj)
        return self._second_order.copy()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._labels == other._labels
                and np.array_equal(self._dummy, other._dummy)
                and np.array_equal(self._edges, other._edges))

    __hash__ = None

    def __repr__(self):
        return (f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges}, "
                f"num_dummy={int(self._dummy.sum())})")

    @classmethod
    def from_adjacency(cls, matrix, labels=None) -> "Graph":
        """Build from a square symmetric 0/1 matrix (dense or sparse)."""
        m = sp.coo_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = m.shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        mask = (m.row < m.col) & (m.data != 0)
        return cls(labels, zip(m.row[mask], m.col[mask]))


@dataclass(frozen=True)
class LoadReport:
    lines: int = 0
    edges: int = 0
    duplicates: int = 0
    self_loops: int = 0


def load_edge_list(stream: TextIO | str, vertices: Iterable[str] | None = None,
                   source: str | None = None) -> tuple[Graph, LoadReport]:
    """Parse an edge list: one whitespace-separated label pair per line.

    Blank lines and ``#`` comments are skipped. Duplicate edges and
    self-loops are dropped and counted in the returned report. Vertices
    are ordered as the declared universe first, then by first appearance.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    index: dict[str, int] = {}
    labels: list[str] = []

    def intern(label, lineno):
        if label.startswith(DUMMY_PREFIX):
            raise ParseError(f"label {label!r} uses reserved prefix {DUMMY_PREFIX!r}",
                             lineno, source)
        i = index.get(label)
        if i is None:
            i = index[label] = len(labels)
            labels.append(label)
        return i

    for label in vertices or ():
        intern(label, None)

    seen: set[tuple[int, int]] = set()
    edges = []
    nlines = dups = loops = 0
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        nlines += 1
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 labels, got {len(tokens)}", lineno, source)
        a, b = intern(tokens[0], lineno), intern(tokens[1], lineno)
        if a == b:
            loops += 1
            continue
        key = (a, b) if a < b else (b, a)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        edges.append(key)

    graph = Graph(labels, edges)
    return graph, LoadReport(lines=nlines, edges=len(edges), duplicates=dups, self_loops=loops)


def load_vertex_universe(stream: TextIO | str) -> list[str]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out = []
    for line in stream:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    for i, j in graph.edges:
        stream.write(f"{graph.labels[i]}\t{graph.labels[j]}\n")


def write_vertex_universe(graph: Graph, stream: TextIO) -> None:
    for lab, d in zip(graph.labels, graph.is_dummy):
        if not d:
            stream.write(f"{lab}\n")


def pad_to_size(graph: Graph, target: int) -> Graph:
    """Append isolated dummy vertices until the graph has ``target`` vertices."""
    n = graph.num_vertices
    if target < n:
        raise ValueError(f"target size {target} is smaller than graph size {n}")
    if target == n:
        return graph
    start = int(graph.is_dummy.sum())
    labels = list(graph.labels) + [f"{DUMMY_PREFIX}{start + k}" for k in range(target - n)]
    dummy = np.concatenate([graph.is_dummy, np.ones(target - n, dtype=bool)])
    return Graph(labels, graph.edges, is_dummy=dummy)


def pad_pair(g: Graph, h: Graph) -> tuple[Graph, Graph]:
    n = max(g.num_vertices, h.num_vertices)
    return pad_to_size(g, n), pad_to_size(h, n)


def _common_neighbor_matrix(adj: sp.csr_matrix) -> sp.csr_matrix:
    a = adj.astype(np.int64)
    w = ((a @ a) + a).tocsr()
    w.setdiag(0)
    w.eliminate_zeros()
    w.data[:] = 1
    return w.astype(np.int8)


def common_neighbor_graph(graph: Graph) -> Graph:
    """Graph joining ``i != j`` when adjacent or sharing a neighbour."""
    w = sp.triu(graph.second_order_matrix(), k=1).tocoo()
    return Graph(graph.labels, zip(w.row, w.col), is_dummy=graph.is_dummy)
