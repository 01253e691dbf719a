"""Exact rational homology oracle: ranks, cycles, boundaries, verification."""

import numpy as np
import pytest

from conftest import annulus, figure_eight, filled_triangle, hollow_triangle, rgg

from hodgegen import (
    NotACycle,
    SimplicialComplex2,
    betti1,
    build_boundaries,
    verify_generating_set,
)
from hodgegen.oracle import (
    BoundaryForm,
    are_homologous,
    is_boundary,
    is_cycle,
    rank_of_columns,
)


def chain_of(K, loop):
    """Signed chain of a closed vertex loop such as (0, 1, 2)."""
    chain = {}
    for a, b in zip(loop, loop[1:] + loop[:1]):
        e = K.edge_id(a, b)
        chain[e] = chain.get(e, 0) + (1 if a < b else -1)
    return {e: c for e, c in chain.items() if c}


def test_betti1_fixed_complexes():
    assert betti1(hollow_triangle()) == 1
    assert betti1(filled_triangle()) == 0
    assert betti1(figure_eight()) == 2
    assert betti1(annulus()) == 1
    assert betti1(SimplicialComplex2(1, [])) == 0
    assert betti1(SimplicialComplex2(4, [(0, 1), (1, 2), (2, 3)])) == 0


def test_betti1_matches_dense_rank_formula():
    for seed, n in enumerate(range(10, 42, 7)):
        K = rgg(n, 400 + seed)
        ops = build_boundaries(K)
        r1 = np.linalg.matrix_rank(ops.dense_d1())
        r2 = np.linalg.matrix_rank(ops.dense_d2())
        assert betti1(K) == K.edge_count - r1 - r2


def test_cycle_and_boundary_predicates():
    K = annulus()
    ops = build_boundaries(K)
    tri = chain_of(K, (0, 1, 5))
    assert is_cycle(ops, tri)
    assert is_boundary(ops, tri)

    outer = chain_of(K, (0, 1, 2, 3))
    inner = chain_of(K, (4, 5, 6, 7))
    assert is_cycle(ops, outer)
    assert not is_boundary(ops, outer)
    assert are_homologous(ops, outer, inner)

    assert not is_cycle(ops, {0: 1})
    assert is_cycle(ops, {})
    assert is_boundary(ops, {})


def test_homology_classes_on_figure_eight():
    K = figure_eight()
    ops = build_boundaries(K)
    left = chain_of(K, (0, 1, 2))
    right = chain_of(K, (0, 3, 4))
    assert not is_boundary(ops, left)
    assert not are_homologous(ops, left, right)
    assert are_homologous(ops, left, left)
    both = {e: left.get(e, 0) + right.get(e, 0) for e in set(left) | set(right)}
    assert is_cycle(ops, both)
    assert not is_boundary(ops, both)


def test_verify_generating_set_pass():
    K = figure_eight()
    left = chain_of(K, (0, 1, 2))
    right = chain_of(K, (0, 3, 4))
    report = verify_generating_set(K, [left, right])
    assert report.ok
    assert report.betti1 == 2
    assert report.set_size == 2
    assert "PASS" in str(report)


def test_verify_generating_set_failures():
    K = figure_eight()
    left = chain_of(K, (0, 1, 2))
    right = chain_of(K, (0, 3, 4))

    short = verify_generating_set(K, [left])
    assert not short.ok

    doubled = {e: 2 * c for e, c in left.items()}
    dependent = verify_generating_set(K, [left, doubled])
    assert not dependent.ok
    assert "FAIL" in str(dependent)

    with pytest.raises(NotACycle):
        verify_generating_set(K, [{0: 1}])

    A = annulus()
    contractible = chain_of(A, (0, 1, 5))
    assert not verify_generating_set(A, [contractible]).ok


def test_rational_exactness_under_scaling():
    K = annulus()
    ops = build_boundaries(K)
    outer = chain_of(K, (0, 1, 2, 3))
    scaled = {e: 7 * c for e, c in outer.items()}
    assert is_cycle(ops, scaled)
    assert not is_boundary(ops, scaled)
    report = verify_generating_set(K, [scaled])
    assert report.ok


def test_boundary_form_accepts_complex_or_operators():
    K = annulus()
    assert betti1(K) == betti1(build_boundaries(K))
    form_a = BoundaryForm(K)
    form_b = BoundaryForm(build_boundaries(K))
    outer = chain_of(K, (0, 1, 2, 3))
    assert form_a.rank_d2 == form_b.rank_d2
    assert form_a.is_boundary(outer) == form_b.is_boundary(outer)
    assert form_a.residue_key(outer) == form_b.residue_key(outer)


def test_rank_of_columns_independent_sets():
    cols = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]
    assert rank_of_columns(cols) == 2
    assert rank_of_columns([]) == 0
    assert rank_of_columns([{}]) == 0
