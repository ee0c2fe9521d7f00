"""scikit-learn style aligners.

Every aligner is configured in ``__init__`` only (so ``get_params``,
``set_params`` and ``clone`` work) and learns an alignment in ``fit``.
Fitted attributes end with an underscore; ``fit_predict`` returns the
matching directly.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .clusters import Partition, build_cluster_graph
from .ga import GaConfig, ga_align
from .graph import ConservationMode
from .isorank import isorank_align, isorank_scores
from .matching import Matching
from .mp import mp_align
from .mrf import DEFAULT_ALPHA, DEFAULT_BETA, build_mrf, gibbs_sample, mrf_extract_alignment
from .objective import TradeoffConfig, balanced_objective
from .oracle import OracleBudget, brute_force_align
from .validation import check_graph, check_graph_pair, check_lambda, check_scores


def _as_partition(clusters) -> Partition:
    if isinstance(clusters, Partition):
        return clusters
    part = Partition()
    for cid, (g_side, h_side) in dict(clusters).items():
        for lab in g_side:
            part.add(str(cid), "G", lab)
        for lab in h_side:
            part.add(str(cid), "H", lab)
    return part


class _AlignerMixin:
    def fit_predict(self, G, H, *args, **kwargs) -> Matching:
        return self.fit(G, H, *args, **kwargs).matching_

    def score(self) -> float:
        """Balanced objective of the fitted matching on the fitted problem."""
        check_is_fitted(self, "matching_")
        lam = getattr(self, "lam", 1.0)
        cfg = TradeoffConfig(lam, ConservationMode.coerce(getattr(self, "mode", "strict")))
        return balanced_objective(self.matching_, self.g_, self.h_, self.scores_, cfg)


def _balanced_inputs(G, H, S):
    g0, h0 = check_graph(G, "G"), check_graph(H, "H")
    g, h = check_graph_pair(g0, h0)
    return g, h, check_scores(S, h0.num_vertices, g0.num_vertices, g.num_vertices)


class GradientAscentAligner(_AlignerMixin, BaseEstimator):
    """Iterated linear-assignment ascent on ``lam * J + (1 - lam) * S``."""

    def __init__(self, lam=0.5, mode="strict", max_iter=100, init="lap", n_restarts=0,
                 random_state=None):
        self.lam = lam
        self.mode = mode
        self.max_iter = max_iter
        self.init = init
        self.n_restarts = n_restarts
        self.random_state = random_state

    def fit(self, G, H, S=None):
        g, h, s = _balanced_inputs(G, H, S)
        cfg = GaConfig(TradeoffConfig(check_lambda(self.lam), ConservationMode.coerce(self.mode)),
                       max_iters=self.max_iter, init=self.init, seed=self.random_state,
                       n_restarts=self.n_restarts)
        res = ga_align(g, h, s, cfg)
        self.g_, self.h_, self.scores_ = g, h, s
        self.matching_ = res.matching
        self.objective_ = res.objective
        self.trace_ = res.trace
        self.n_iter_ = res.n_iter
        self.stop_reason_ = res.stop_reason
        return self


class IsoRankAligner(_AlignerMixin, BaseEstimator):
    """Spectral scores blended with similarity, then one-to-one extraction."""

    def __init__(self, lam=0.5, tol=1e-9, max_iter=100):
        self.lam = lam
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, G, H, S=None):
        g, h, s = _balanced_inputs(G, H, S)
        res = isorank_scores(g, h, s, check_lambda(self.lam), self.tol, self.max_iter)
        self.g_, self.h_, self.scores_ = g, h, s
        self.similarity_ = res.scores
        self.converged_ = res.converged
        self.n_iter_ = res.n_iter
        self.metadata_ = res.metadata
        self.matching_ = isorank_align(res.scores, s)
        return self

    def transform(self, G=None, H=None):
        """The fitted score matrix ``R[g, h]``."""
        check_is_fitted(self, "similarity_")
        return self.similarity_

    def fit_transform(self, G, H, S=None):
        return self.fit(G, H, S).similarity_


class MessagePassingAligner(_AlignerMixin, BaseEstimator):
    """Exact constrained alignment over a tree-structured clustering."""

    def __init__(self, mode="strict", max_side=8):
        self.mode = mode
        self.max_side = max_side

    def fit(self, G, H, clusters, S=None):
        g0, h0 = check_graph(G, "G"), check_graph(H, "H")
        cg = build_cluster_graph(_as_partition(clusters), g0, h0, self.mode, self.max_side)
        res = mp_align(cg)
        self.cluster_graph_ = cg
        self.g_, self.h_ = cg.g, cg.h
        self.scores_ = check_scores(S, h0.num_vertices, g0.num_vertices,
                                    cg.g.num_vertices).with_allowed(cg.allowed())
        self.matching_ = res.matching
        self.value_ = res.value
        return self


class GibbsMrfAligner(_AlignerMixin, BaseEstimator):
    """Ortholog-indicator MRF sampled by Gibbs, extracted per cluster."""

    def __init__(self, alpha=DEFAULT_ALPHA, beta=DEFAULT_BETA, burn_in=1000, n_samples=10000,
                 mode="strict", random_state=0):
        self.alpha = alpha
        self.beta = beta
        self.burn_in = burn_in
        self.n_samples = n_samples
        self.mode = mode
        self.random_state = random_state

    def fit(self, G, H, clusters, S=None):
        g0, h0 = check_graph(G, "G"), check_graph(H, "H")
        cg = build_cluster_graph(_as_partition(clusters), g0, h0, self.mode)
        model = build_mrf(cg, self.alpha, self.beta)
        self.model_ = model
        self.marginals_ = gibbs_sample(model, self.burn_in, self.n_samples, self.random_state)
        self.cluster_graph_ = cg
        self.g_, self.h_ = cg.g, cg.h
        self.scores_ = check_scores(S, h0.num_vertices, g0.num_vertices,
                                    cg.g.num_vertices).with_allowed(cg.allowed())
        self.matching_ = mrf_extract_alignment(model, self.marginals_)
        return self


class ExhaustiveAligner(_AlignerMixin, BaseEstimator):
    """Brute-force optimum; only for small problems."""

    def __init__(self, lam=1.0, mode="strict", max_n=9, max_states=1 << 20):
        self.lam = lam
        self.mode = mode
        self.max_n = max_n
        self.max_states = max_states

    def fit(self, G, H, S=None):
        g, h, s = _balanced_inputs(G, H, S)
        m, val = brute_force_align(g, h, s, check_lambda(self.lam), self.mode,
                                   OracleBudget(self.max_n, self.max_states))
        self.g_, self.h_, self.scores_ = g, h, s
        self.matching_ = m
        self.objective_ = val
        return self

