"""Trade-off sweeps: run solvers over a lambda grid and score every result
with the objective module.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .dispatch import Problem, run_method
from .exceptions import AlignmentError, ParseError
from .objective import conserved_count, mean_real_similarity, similarity_sum

DEFAULT_GRID = tuple(round(float(x), 10) for x in np.linspace(0.0, 1.0, 21))

FIELDS = ("method", "lambda", "J", "S", "mean_similarity", "error")


@dataclass
class SweepRow:
    method: str
    lam: float
    J: int | None
    S: float | None
    mean_similarity: float | None
    runtime: float = 0.0
    error: str = ""


@dataclass
class SweepResult:
    rows: list[SweepRow]

    def to_csv(self, stream: TextIO, timing: bool = False) -> None:
        """Write rows; runtimes only with ``timing`` so default output is reproducible."""
        fields = FIELDS + (("runtime_seconds",) if timing else ())
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(fields)
        for r in self.rows:
            vals = [r.method, repr(r.lam),
                    "" if r.J is None else str(r.J),
                    "" if r.S is None else repr(r.S),
                    "" if r.mean_similarity is None else repr(r.mean_similarity),
                    r.error]
            if timing:
                vals.append(f"{r.runtime:.6f}")
            w.writerow(vals)

    def by_method(self, method: str) -> list[SweepRow]:
        return [r for r in self.rows if r.method == method]


def read_sweep_csv(stream: TextIO | str) -> SweepResult:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream)
    missing = set(FIELDS) - set(reader.fieldnames or ())
    if missing:
        raise ParseError(f"sweep CSV lacks columns {sorted(missing)}")
    rows = []
    for rec in reader:
        rows.append(SweepRow(
            method=rec["method"], lam=float(rec["lambda"]),
            J=int(rec["J"]) if rec["J"] else None,
            S=float(rec["S"]) if rec["S"] else None,
            mean_similarity=float(rec["mean_similarity"]) if rec["mean_similarity"] else None,
            runtime=float(rec.get("runtime_seconds") or 0.0),
            error=rec["error"]))
    return SweepResult(rows)


def parse_grid(text: str) -> list[float]:
    """``"0,0.5,1"`` or ``"start:stop:step"`` (stop inclusive)."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(count)]
    return [float(x) for x in text.split(",")]


def _run_one(problem: Problem, method: str, lam: float, seed: int, options: dict) -> SweepRow:
    t0 = time.perf_counter()
    try:
        m = run_method(method, problem, lam=lam, seed=seed, **options.get(method, {}))
    except (AlignmentError, ValueError) as exc:
        return SweepRow(method, lam, None, None, None, time.perf_counter() - t0,
                        f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - t0
    g, h, s = problem.g, problem.h, problem.scores
    return SweepRow(method, lam, conserved_count(m, g, h, problem.mode),
                    similarity_sum(m, s, g, h), mean_real_similarity(m, s, g, h), elapsed)


def sweep(problem: Problem, methods: Iterable[str], grid: Iterable[float] = DEFAULT_GRID,
          seed: int = 0, n_jobs: int = 1, options: dict | None = None) -> SweepResult:
    """One row per (method, lambda), sorted by method then lambda.

    J and S are recomputed from each returned matching. A failing run
    becomes a row with an error message; the sweep carries on.
    """
    grid = [float(x) for x in grid]
    for lam in grid:
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"grid value {lam} outside [0, 1]")
    jobs = [(m, lam) for m in methods for lam in grid]
    options = options or {}
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(lambda job: _run_one(problem, job[0], job[1], seed, options), jobs))
    else:
        rows = [_run_one(problem, m, lam, seed, options) for m, lam in jobs]
    rows.sort(key=lambda r: (r.method, r.lam))
    return SweepResult(rows)
