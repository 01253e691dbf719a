"""Spanning trees, fundamental cycles, labeling, selection, reduction."""

import numpy as np
import pytest

from conftest import annulus, figure_eight, filled_triangle, hollow_triangle, rgg

from hodgegen import (
    CycleRecord,
    PipelineConfig,
    RankDeficientHarmonics,
    betti1,
    build_boundaries,
    chain_from_json_cycle,
    chain_to_json_cycle,
    classify_cycles,
    cycle_from_nontree_edge,
    cycle_integral,
    derive_seeds,
    integral_function,
    nontree_edges,
    partition_homologous,
    reduce_to_generators,
    result_to_json,
    run_centralized,
    select_representatives,
    spanning_tree_bfs,
    verify_generating_set,
)
from hodgegen.oracle import BoundaryForm, is_cycle
from hodgegen.rng import centered_vector


def bfs_hops(K, root):
    hops = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for w in K.neighbors[v]:
                if w not in hops:
                    hops[w] = hops[v] + 1
                    nxt.append(w)
        frontier = nxt
    return hops


def test_spanning_tree_shape_and_hops():
    for K in (annulus(), figure_eight(), rgg(40, 8)):
        tree = spanning_tree_bfs(K)
        root = K.vertex_count - 1
        assert tree.root == root
        assert tree.parent[root] == -1
        assert tree.hop[root] == 0
        hops = bfs_hops(K, root)
        for v in range(K.vertex_count):
            assert tree.hop[v] == hops[v]
            if v != root:
                p = int(tree.parent[v])
                assert tree.hop[v] == tree.hop[p] + 1
                e = int(tree.parent_edge[v])
                assert tuple(sorted((v, p))) == K.edges[e]
        assert len(nontree_edges(tree)) == K.edge_count - K.vertex_count + 1


def test_spanning_tree_explicit_root():
    K = annulus()
    tree = spanning_tree_bfs(K, root=2)
    assert tree.root == 2
    assert tree.hop[2] == 0


def test_fundamental_cycles_are_cycles():
    K = annulus()
    ops = build_boundaries(K)
    tree = spanning_tree_bfs(K)
    for e in nontree_edges(tree):
        rec = cycle_from_nontree_edge(K, tree, e)
        assert rec.nontree_edge == e
        assert rec.terminals == K.edges[e]
        assert is_cycle(ops, rec.chain)
        assert set(rec.chain.values()) <= {-1, 1}
        assert rec.chain[e] == 1
        assert rec.hop_length == len(rec.chain)


def test_integral_function_telescopes():
    K = annulus()
    tree = spanning_tree_bfs(K)
    y = centered_vector(K.edge_count, 17)
    f = integral_function(K, tree, y)
    assert f[tree.root] == 0.0
    for v in range(K.vertex_count):
        if v == tree.root:
            continue
        p = int(tree.parent[v])
        e = int(tree.parent_edge[v])
        want = f[p] + (y[e] if p < v else -y[e])
        assert f[v] == want


def test_cycle_integral_matches_chain_dot_product():
    K = annulus()
    tree = spanning_tree_bfs(K)
    y = centered_vector(K.edge_count, 23)
    f = integral_function(K, tree, y)
    for e in nontree_edges(tree):
        rec = cycle_from_nontree_edge(K, tree, e)
        vj, vk = rec.terminals
        got = cycle_integral(float(f[vj]), float(y[e]), float(f[vk]))
        want = sum(c * y[g] for g, c in sorted(rec.chain.items()))
        assert abs(got - want) < 1e-12


def test_classification_matches_oracle_on_annulus():
    K = annulus()
    result = run_centralized(K)
    form = BoundaryForm(K)
    contractible = set(id(r) for r in result.contractible)
    for rec in result.records:
        assert (id(rec) in contractible) == form.is_boundary(rec.chain)
    assert len(result.contractible) < len(result.records)


def rec_with(label, hop=3, edge=0):
    return CycleRecord(nontree_edge=edge, terminals=(0, 1), chain={},
                       hop_length=hop, label=label, label_vector=(label,))


def test_partition_single_linkage_chains():
    rel = 1e-4
    a = rec_with(1.0, edge=1)
    b = rec_with(1.00009, edge=2)
    c = rec_with(1.00018, edge=3)
    d = rec_with(1.5, edge=4)
    clusters = partition_homologous([d, c, a, b], rel=rel)
    assert [len(cl) for cl in clusters] == [3, 1]
    assert {r.nontree_edge for r in clusters[0]} == {1, 2, 3}

    far = partition_homologous([a, rec_with(1.2, edge=9)], rel=rel)
    assert [len(cl) for cl in far] == [1, 1]


def test_select_representatives_min_hop_then_edge():
    cluster_a = [rec_with(1.0, hop=5, edge=4), rec_with(1.0, hop=3, edge=9),
                 rec_with(1.0, hop=3, edge=2)]
    cluster_b = [rec_with(2.0, hop=4, edge=1)]
    reps = select_representatives([sorted(cluster_a, key=lambda r: (r.hop_length, r.nontree_edge)),
                                   cluster_b])
    assert [(r.hop_length, r.nontree_edge) for r in reps] == [(3, 2), (4, 1)]


def test_reduce_drops_dependent_third_record():
    recs = [rec_with(1.0, edge=0), rec_with(2.0, edge=1), rec_with(3.0, edge=2)]
    harmonics = [centered_vector(6, s) for s in range(3)]
    R = np.array([[1.0, 0.0, 1.0],
                  [0.0, 1.0, 1.0],
                  [0.0, 0.0, 0.0]])
    gens = reduce_to_generators(recs, harmonics, R=R)
    assert gens.kept == [0, 1]
    assert [r.nontree_edge for r in gens.H] == [0, 1]
    assert gens.R.shape == (3, 3)


def test_reduce_uses_direct_dot_products_without_R():
    recs = []
    for edge, chain in ((0, {0: 1, 1: -1}), (1, {2: 1, 3: 1})):
        rec = rec_with(1.0, edge=edge)
        rec.chain = chain
        recs.append(rec)
    harmonics = [np.array([1.0, 0.0, 0.0, 0.0]),
                 np.array([0.0, 0.0, 1.0, 0.0])]
    gens = reduce_to_generators(recs, harmonics)
    assert np.array_equal(gens.R, np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert gens.kept == [0, 1]


def test_reduce_rank_deficient_harmonics_raises():
    recs = [rec_with(1.0, edge=0), rec_with(2.0, edge=1)]
    same = centered_vector(5, 1)
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(RankDeficientHarmonics):
        reduce_to_generators(recs, [same, same * (1 + 1e-14)], R=R)


def test_reduce_empty_P():
    gens = reduce_to_generators([], [])
    assert gens.P == [] and gens.H == [] and gens.kept == []
    assert gens.R.shape == (0, 0)


def test_run_centralized_fixed_complexes():
    for K, want in ((hollow_triangle(), 1), (filled_triangle(), 0),
                    (figure_eight(), 2), (annulus(), 1)):
        result = run_centralized(K)
        assert result.betti1_estimate == want == betti1(K)
        assert len(result.iterations_per_harmonic) == max(1, want)
        chains = [rec.chain for rec in result.generators.H]
        assert verify_generating_set(K, chains).ok
    empty = run_centralized(filled_triangle())
    assert empty.generators.P == []
    assert len(empty.iterations_per_harmonic) == 1


def test_run_centralized_seeded_loop():
    for seed, n in enumerate(range(15, 60, 9)):
        K = rgg(n, 700 + seed)
        result = run_centralized(K, PipelineConfig(seed=seed))
        assert result.betti1_estimate == betti1(K)
        chains = [rec.chain for rec in result.generators.H]
        assert verify_generating_set(K, chains).ok
        assert len(result.iterations_per_harmonic) >= max(1, len(result.generators.P))


def test_single_class_reuses_first_harmonic():
    result = run_centralized(annulus())
    assert len(result.generators.P) == 1
    assert len(result.iterations_per_harmonic) == 1
    assert result.generators.R.shape == (1, 1)


def test_multi_label_harmonics_centralized():
    K = figure_eight()
    result = run_centralized(K, PipelineConfig(label_harmonics=2))
    for rec in result.records:
        assert len(rec.label_vector) == 2
    assert result.betti1_estimate == 2
    with pytest.raises(ValueError):
        run_centralized(K, PipelineConfig(label_harmonics=0))


def test_derive_seeds_stable_prefix():
    assert derive_seeds(5, 3) == derive_seeds(5, 5)[:3]
    assert len(set(derive_seeds(5, 10))) == 10
    assert derive_seeds(5, 2) != derive_seeds(6, 2)


def test_json_round_trip():
    K = figure_eight()
    result = run_centralized(K)
    doc = result_to_json(result)
    assert sorted(doc) == ["betti1_estimate", "cycles", "delta",
                           "iterations_per_harmonic"]
    assert doc["betti1_estimate"] == 2
    for cyc, rec in zip(doc["cycles"], result.generators.H):
        assert sorted(cyc) == ["edges", "hop_length", "label", "signs"]
        back = chain_from_json_cycle(K, cyc)
        assert back == rec.chain
    with pytest.raises(ValueError):
        chain_from_json_cycle(K, {"edges": [[0, 1]], "signs": [1, -1],
                                  "label": 0.0, "hop_length": 2})
