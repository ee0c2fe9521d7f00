"""Global network alignment as graph matching.

Exact message passing on tree-structured clusterings, gradient ascent,
IsoRank-style spectral scores and an MRF Gibbs sampler, with brute-force
oracles for small instances.
"""

from .assignment import solve_lap_max
from .clusters import ClusterGraph, Partition, build_cluster_graph, load_partition
from .estimators import (ExhaustiveAligner, GibbsMrfAligner, GradientAscentAligner,
                         IsoRankAligner, MessagePassingAligner)
from .exceptions import (AlignmentError, BudgetExceededError, CapExceededError,
                         InfeasibleError, NotATreeError, ParseError)
from .ga import GaConfig, ga_align
from .graph import (ConservationMode, Graph, common_neighbor_graph, load_edge_list,
                    pad_to_size)
from .isorank import isorank_align, isorank_operator_apply, isorank_scores
from .matching import Matching, ScoreMatrix, is_feasible, permute_graph
from .mp import j1, j2, mp_align
from .mrf import build_mrf, gibbs_sample, mrf_extract_alignment
from .objective import (TradeoffConfig, balanced_objective, conserved_count,
                        conserved_count_quadratic, similarity_sum)
from .synth import ClusterPlan, SyntheticSpec, synth_generate

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "BudgetExceededError", "CapExceededError", "ClusterGraph", "ClusterPlan",
    "ConservationMode", "ExhaustiveAligner", "GaConfig", "GibbsMrfAligner",
    "GradientAscentAligner", "Graph", "InfeasibleError", "IsoRankAligner", "Matching",
    "MessagePassingAligner", "NotATreeError", "ParseError", "Partition", "ScoreMatrix",
    "TradeoffConfig", "balanced_objective", "build_cluster_graph", "build_mrf",
    "common_neighbor_graph", "conserved_count", "conserved_count_quadratic", "ga_align",
    "gibbs_sample", "is_feasible", "isorank_align", "isorank_operator_apply",
    "isorank_scores", "j1", "j2", "load_edge_list", "load_partition", "mp_align",
    "mrf_extract_alignment", "pad_to_size", "permute_graph", "similarity_sum",
    "solve_lap_max", "SyntheticSpec", "synth_generate",
]
