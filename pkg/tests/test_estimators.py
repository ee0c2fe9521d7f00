import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gnalign.estimators import (ExhaustiveAligner, GibbsMrfAligner, GradientAscentAligner,
                                IsoRankAligner, MessagePassingAligner)
from gnalign.graph import Graph
from gnalign.matching import Matching
from gnalign.synth import ClusterPlan, SyntheticSpec, synth_generate


def adjacency(n, p, seed):
    rng = np.random.default_rng(seed)
    a = np.triu(rng.random((n, n)) < p, 1).astype(int)
    return a + a.T


@pytest.mark.parametrize("cls", [GradientAscentAligner, IsoRankAligner, ExhaustiveAligner,
                                 MessagePassingAligner, GibbsMrfAligner])
def test_params_and_clone(cls):
    est = cls()
    params = est.get_params()
    twin = clone(est)
    assert twin.get_params() == params
    key = next(iter(params))
    est.set_params(**{key: params[key]})


def test_unfitted_score_raises():
    with pytest.raises(NotFittedError):
        GradientAscentAligner().score()


def test_dense_adjacency_inputs():
    a = adjacency(6, 0.5, 0)
    est = GradientAscentAligner(lam=1.0).fit(a, a)
    assert np.isfinite(est.score())
    exact = ExhaustiveAligner(lam=1.0).fit(a, a)
    assert exact.objective_ == a.sum() // 2
    assert exact.score() == exact.objective_


def test_unequal_sizes_are_padded():
    est = IsoRankAligner(lam=0.5).fit(adjacency(5, 0.5, 1), adjacency(3, 0.7, 2))
    assert est.matching_.size == 5
    assert est.transform().shape == (5, 5)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        GradientAscentAligner().fit(np.array([[0, 1], [0, 0]]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        GradientAscentAligner(lam=2.0).fit(np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(TypeError):
        GradientAscentAligner().fit("graph", np.zeros((2, 2)))


def test_clustered_aligners_on_planted_instance():
    inst = synth_generate(SyntheticSpec(30, 0.3, 0.0, seed=2,
                                        cluster_plan=ClusterPlan(10, tree=True)))
    mp = MessagePassingAligner().fit(inst.g, inst.h, inst.partition)
    assert mp.value_ == inst.g.num_edges == mp.score()
    clusters = {cid: sides for cid, sides in inst.partition.clusters.items()}
    mrf = GibbsMrfAligner(burn_in=50, n_samples=500).fit(inst.g, inst.h, clusters)
    assert isinstance(mrf.fit_predict(inst.g, inst.h, clusters), Matching)
    assert mrf.score() <= mp.score()


def test_graph_objects_accepted():
    g = Graph("abc", [(0, 1), (1, 2)])
    m = GradientAscentAligner(lam=1.0, init="identity").fit_predict(g, g)
    assert m == Matching.identity(3)
