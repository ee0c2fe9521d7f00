"""Alignment TSV reading and writing."""

from __future__ import annotations

import io
from typing import TextIO

import numpy as np

from .exceptions import ParseError
from .graph import Graph
from .matching import Matching, ScoreMatrix


def write_alignment(matching: Matching, g: Graph, h: Graph, scores: ScoreMatrix | None,
                    stream: TextIO, include_dummy: bool = False,
                    header: dict | None = None) -> None:
    """``h_label<TAB>g_label<TAB>score`` per matched pair, H order.

    Only real pairs are written unless ``include_dummy``. ``header`` items
    become leading ``#`` comment lines.
    """
    for key, val in (header or {}).items():
        stream.write(f"# {key}={val}\n")
    for hi, gi in enumerate(matching.map_h_to_g.tolist()):
        dummy = h.is_dummy[hi] or g.is_dummy[gi]
        if dummy and not include_dummy:
            continue
        s = 0.0 if (scores is None or dummy) else float(scores.values[hi, gi])
        stream.write(f"{h.labels[hi]}\t{g.labels[gi]}\t{s!r}\n")


def read_alignment_pairs(stream: TextIO | str, source: str | None = None) -> list[tuple[str, str]]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out = []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) not in (2, 3):
            raise ParseError(f"expected 2 or 3 fields, got {len(tok)}", lineno, source)
        out.append((tok[0], tok[1]))
    return out


def complete_matching(pairs: list[tuple[str, str]], g: Graph, h: Graph) -> Matching:
    """Matching on padded ``g``, ``h`` containing ``pairs`` (labels, dummies allowed).

    Unlisted real vertices go to dummies of the other side in index order,
    and leftover dummies pair up. Raises ParseError if a vertex repeats or
    the padding is too small for every unlisted real vertex to get a dummy.
    """
    n = g.num_vertices
    if h.num_vertices != n:
        raise ValueError("graphs must be padded to equal size")
    out = np.full(n, -1, dtype=np.int64)
    g_used = np.zeros(n, dtype=bool)
    for hl, gl in pairs:
        try:
            hi, gi = h.index(hl), g.index(gl)
        except KeyError as exc:
            raise ParseError(f"unknown label {exc.args[0]!r} in alignment") from None
        if out[hi] >= 0 or g_used[gi]:
            raise ParseError(f"vertex repeated in alignment: {hl} / {gl}")
        out[hi] = gi
        g_used[gi] = True
    free_g_dummy = [v for v in range(n) if not g_used[v] and g.is_dummy[v]]
    free_g_real = [v for v in range(n) if not g_used[v] and not g.is_dummy[v]]
    free_h_real = [v for v in range(n) if out[v] < 0 and not h.is_dummy[v]]
    free_h_dummy = [v for v in range(n) if out[v] < 0 and h.is_dummy[v]]
    if len(free_h_real) > len(free_g_dummy) or len(free_g_real) > len(free_h_dummy):
        raise ParseError("not enough dummy vertices to leave unlisted vertices unmatched")
    for v in free_h_real:
        out[v] = free_g_dummy.pop(0)
    for v in free_g_real:
        out[free_h_dummy.pop(0)] = v
    for hv, gv in zip(free_h_dummy, free_g_dummy):
        out[hv] = gv
    return Matching(out)
