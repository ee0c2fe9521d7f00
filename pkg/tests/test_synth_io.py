import io

import numpy as np
import pytest

from gnalign.clusters import build_cluster_graph, load_partition
from gnalign.exceptions import ParseError
from gnalign.graph import load_edge_list, load_vertex_universe, pad_pair, pad_to_size
from gnalign.io import complete_matching, read_alignment_pairs, write_alignment
from gnalign.matching import Matching, load_similarity
from gnalign.mp import check_forest
from gnalign.objective import conserved_count
from gnalign.synth import (ClusterPlan, SyntheticSpec, expected_planted_conserved,
                           synth_generate, write_instance)


def test_noise_free_planted_conserves_every_edge():
    inst = synth_generate(SyntheticSpec(40, 0.15, 0.0, seed=1))
    assert inst.g.num_edges == inst.h.num_edges
    assert conserved_count(inst.planted, inst.g, inst.h) == inst.g.num_edges


def test_noise_keeps_edge_count():
    inst = synth_generate(SyntheticSpec(50, 0.1, 0.3, seed=2))
    assert inst.h.num_edges == inst.g.num_edges


@pytest.mark.parametrize("noise", [0.2, 1.0])
def test_planted_conservation_mean(noise):
    n, p = 30, 0.2
    counts, ms = [], []
    for seed in range(50):
        inst = synth_generate(SyntheticSpec(n, p, noise, seed=seed))
        counts.append(conserved_count(inst.planted, inst.g, inst.h))
        ms.append(inst.g.num_edges)
    expect = np.mean([expected_planted_conserved(m, n, noise) for m in ms])
    sem = np.std(counts) / np.sqrt(len(counts))
    assert abs(np.mean(counts) - expect) < 4 * sem + 0.5


def test_tree_plan_yields_forest_containing_planted_pairs():
    inst = synth_generate(SyntheticSpec(40, 0.4, 0.0, seed=5, cluster_plan=ClusterPlan(10, tree=True)))
    cg = build_cluster_graph(inst.partition, inst.g, inst.h)
    check_forest(cg)
    pi = inst.planted.map_h_to_g
    for c in range(cg.num_clusters):
        gs = {int(v) for v in cg.g_members[c] if not cg.g.is_dummy[v]}
        hs = [int(v) for v in cg.h_members[c] if not cg.h.is_dummy[v]]
        assert {int(pi[v]) for v in hs} == gs


def test_seed_reproducibility():
    a = synth_generate(SyntheticSpec(25, 0.2, 0.1, seed=9))
    b = synth_generate(SyntheticSpec(25, 0.2, 0.1, seed=9))
    assert a.g == b.g and a.h == b.h and a.planted == b.planted
    np.testing.assert_array_equal(a.scores.values, b.scores.values)


def test_spec_validation():
    with pytest.raises(ValueError):
        SyntheticSpec(10, 1.5)
    with pytest.raises(ValueError):
        synth_generate(SyntheticSpec(4, 0.5, cluster_plan=ClusterPlan(5, 1.0, 3)))


def test_written_files_reload(tmp_path):
    inst = synth_generate(SyntheticSpec(20, 0.2, 0.1, seed=4, cluster_plan=ClusterPlan(5)))
    paths = write_instance(inst, tmp_path)
    g, _ = load_edge_list(paths["g_edges"].read_text(), load_vertex_universe(paths["g_vertices"].read_text()))
    h, _ = load_edge_list(paths["h_edges"].read_text(), load_vertex_universe(paths["h_vertices"].read_text()))
    assert g == inst.g and h == inst.h
    s = load_similarity(paths["sim"].read_text(), g, h)
    np.testing.assert_array_equal(s.values, inst.scores.values)
    part = load_partition(paths["clusters"].read_text())
    assert part.clusters == inst.partition.clusters


def test_alignment_round_trip():
    inst = synth_generate(SyntheticSpec(12, 0.3, seed=0))
    g, h = pad_pair(inst.g, inst.h)
    buf = io.StringIO()
    write_alignment(inst.planted, g, h, inst.scores, buf, header={"method": "planted"})
    text = buf.getvalue()
    assert text.startswith("# method=planted\n")
    back = complete_matching(read_alignment_pairs(text), g, h)
    assert back == inst.planted


def test_complete_matching_sends_unlisted_to_dummies():
    g = pad_to_size(load_edge_list("a b\nb c\n")[0], 5)
    h = pad_to_size(load_edge_list("x y\n")[0], 5)
    m = complete_matching([("x", "b")], g, h)
    assert isinstance(m, Matching)
    assert m[h.index("x")] == g.index("b")
    assert g.is_dummy[m[h.index("y")]]


def test_alignment_parse_errors():
    with pytest.raises(ParseError):
        read_alignment_pairs("only_one_token\n")
