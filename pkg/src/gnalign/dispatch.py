"""Problem setup shared by the CLI and the sweep harness, and a single entry
point that runs any solver by name.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clusters import ClusterGraph, Partition, build_cluster_graph
from .ga import GaConfig, ga_align
from .graph import ConservationMode, Graph, pad_pair
from .isorank import isorank_align, isorank_scores
from .matching import Matching, ScoreMatrix
from .mp import mp_align
from .mrf import DEFAULT_ALPHA, DEFAULT_BETA, build_mrf, gibbs_sample, mrf_extract_alignment
from .objective import TradeoffConfig
from .oracle import OracleBudget, brute_force_align

METHODS = ("mp", "ga", "isorank", "mrf", "oracle")


@dataclass
class Problem:
    """Padded graphs and a square score matrix of the same size.

    With a clustering, the padding follows the clusters and ``scores``
    forbids every pair outside them.
    """

    g: Graph
    h: Graph
    scores: ScoreMatrix
    mode: ConservationMode
    cluster_graph: ClusterGraph | None = None


def prepare_problem(g: Graph, h: Graph, scores: ScoreMatrix | None = None,
                    partition: Partition | None = None,
                    mode: ConservationMode | str = ConservationMode.STRICT,
                    max_side: int = 8) -> Problem:
    """``scores`` is ``[h, g]`` over the unpadded graphs (or ``None`` for all zeros)."""
    mode = ConservationMode.coerce(mode)
    if scores is None:
        scores = ScoreMatrix.zeros(h.num_vertices, g.num_vertices)
    if scores.shape != (h.num_vertices, g.num_vertices):
        raise ValueError(f"scores shape {scores.shape} does not match "
                         f"({h.num_vertices}, {g.num_vertices})")
    if partition is not None:
        cg = build_cluster_graph(partition, g, h, mode, max_side=max_side)
        n = cg.g.num_vertices
        padded = scores.padded(n).with_allowed(cg.allowed())
        return Problem(cg.g, cg.h, padded, mode, cg)
    gp, hp = pad_pair(g, h)
    return Problem(gp, hp, scores.padded(gp.num_vertices), mode)


def run_method(method: str, problem: Problem, lam: float = 1.0, seed: int = 0,
               **options) -> Matching:
    """Run one solver on a prepared problem and return its matching.

    Options: ``max_iters``, ``n_restarts`` (ga); ``tol``, ``max_iters``
    (isorank); ``alpha``, ``beta``, ``burn_in``, ``samples`` (mrf);
    ``max_n``, ``max_states`` (oracle); ``roots`` (mp).
    """
    mode = problem.mode
    if method == "ga":
        cfg = GaConfig(TradeoffConfig(lam, mode), max_iters=options.get("max_iters", 100),
                       seed=seed, n_restarts=options.get("n_restarts", 0))
        return ga_align(problem.g, problem.h, problem.scores, cfg).matching
    if method == "isorank":
        res = isorank_scores(problem.g, problem.h, problem.scores, lam,
                             tol=options.get("tol", 1e-9), max_iters=options.get("max_iters", 100))
        m = isorank_align(res.scores, problem.scores)
        m.provenance.update({"lambda": lam, "converged": res.converged, "n_iter": res.n_iter})
        return m
    if method == "oracle":
        budget = OracleBudget(options.get("max_n", 9), options.get("max_states", 1 << 20))
        return brute_force_align(problem.g, problem.h, problem.scores, lam, mode, budget)[0]
    if method in ("mp", "mrf"):
        if problem.cluster_graph is None:
            raise ValueError(f"method {method!r} requires a clustering")
        if method == "mp":
            return mp_align(problem.cluster_graph, roots=options.get("roots")).matching
        model = build_mrf(problem.cluster_graph, options.get("alpha", DEFAULT_ALPHA),
                          options.get("beta", DEFAULT_BETA))
        marg = gibbs_sample(model, options.get("burn_in", 1000), options.get("samples", 10000),
                            seed)
        return mrf_extract_alignment(model, marg)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
