"""Relaxation onto the harmonic subspace: stop rule, rates, references."""

import math

import numpy as np
import pytest

from conftest import annulus, figure_eight, filled_triangle, hollow_triangle, rgg

from hodgegen import (
    HarmonicConfig,
    MaxIterationsExceeded,
    build_boundaries,
    build_laplacian,
    compute_delta,
    default_max_iterations,
    initial_vector,
    iterate_harmonic,
    kernels,
    l1_one_norm,
)
from hodgegen.errors import ScaleExceeded, ZeroMatrix
from hodgegen.harmonic import (
    project_onto_kernel_reference,
    smallest_positive_eigenvalue,
)


def lap_of(K):
    return build_laplacian(build_boundaries(K))


def update_norms(lap, y0, delta, rounds):
    """Sup norms of the applied updates over a fixed number of sweeps."""
    y = np.array(y0, dtype=np.float64, copy=True)
    out = np.empty_like(y)
    norms = []
    for _ in range(rounds):
        norms.append(kernels.sweep(lap.indptr, lap.indices, lap.data, y, out, delta))
        y, out = out, y
    return norms


def test_threshold_is_epsilon_times_delta():
    lap = lap_of(annulus())
    res = iterate_harmonic(lap, HarmonicConfig(epsilon=1e-6, seed=2))
    assert res.delta == 1.0 / l1_one_norm(lap)
    assert res.threshold == 1e-6 * res.delta
    assert res.update_norm < res.threshold


def test_converged_runs_have_small_residual():
    # The stop rule caps the update norm, so ||L1 y|| < epsilon holds.
    eps = 1e-6
    for seed, n in enumerate(range(12, 44, 6)):
        K = rgg(n, 31 + seed, avg_degree=8.0)
        lap = lap_of(K)
        res = iterate_harmonic(lap, HarmonicConfig(epsilon=eps, seed=seed))
        residual = np.abs(lap.dense() @ res.y).max()
        assert residual < eps


def test_final_iterate_near_kernel_projection():
    eps = 1e-6
    for seed, n in enumerate(range(15, 40, 5)):
        K = rgg(n, 60 + seed, avg_degree=12.0)
        lap = lap_of(K)
        y0 = initial_vector(K.edge_count, seed)
        res = iterate_harmonic(lap, HarmonicConfig(epsilon=eps, seed=seed))
        ref = project_onto_kernel_reference(lap, y0)
        err = np.abs(res.y - ref).max()
        lam1 = smallest_positive_eigenvalue(lap)
        assert err <= math.sqrt(K.edge_count) * eps / lam1 + 1e-12


def test_kernel_component_is_preserved():
    # The update only moves the iterate inside the orthogonal complement.
    lap = lap_of(annulus())
    y0 = initial_vector(lap.shape[0], 4)
    res = iterate_harmonic(lap, HarmonicConfig(epsilon=1e-10, seed=4))
    p0 = project_onto_kernel_reference(lap, y0)
    p1 = project_onto_kernel_reference(lap, res.y)
    assert np.abs(p0 - p1).max() < 1e-12


def test_hollow_triangle_harmonic_direction():
    K = hollow_triangle()
    res = iterate_harmonic(lap_of(K), HarmonicConfig(epsilon=1e-9, seed=1))
    y = res.y
    # Kernel of L1 is spanned by the oriented cycle (+1, -1, +1).
    want = np.array([1.0, -1.0, 1.0])
    scale = y[0] / want[0]
    assert np.abs(y - scale * want).max() < 1e-8
    assert abs(scale) > 0.01


def test_filled_triangle_relaxes_to_zero():
    res = iterate_harmonic(lap_of(filled_triangle()), HarmonicConfig(epsilon=1e-8))
    assert np.abs(res.y).max() < 1e-7


def test_no_divergence_at_default_step():
    for seed in range(8):
        K = rgg(25, 300 + seed)
        lap = lap_of(K)
        res = iterate_harmonic(lap, HarmonicConfig(seed=seed))
        assert np.isfinite(res.y).all()
        assert res.update_norm < res.threshold


def test_update_norm_grows_past_stability_margin():
    # Step 2.7 / ||L1||_1 exceeds 2 / lambda_max on the hollow triangle,
    # so the dominant mode flips sign and grows by 2.7 * 3 / 4 - 1 per pass.
    K = hollow_triangle()
    lap = lap_of(K)
    delta = 2.7 / l1_one_norm(lap)
    norms = update_norms(lap, initial_vector(3, 0), delta, 150)
    assert norms[-1] > norms[0]
    assert norms[-1] > 10 * norms[5]
    growth = norms[-1] / norms[-2]
    assert abs(growth - 1.025) < 1e-6
    with pytest.raises(MaxIterationsExceeded):
        iterate_harmonic(lap, HarmonicConfig(delta=delta, max_iterations=200))


def test_decay_ratio_bounded_after_transient():
    # Successive update norms settle under 1 - delta * lambda_1 + 0.05
    # within ten sweeps.
    complexes = [hollow_triangle(), filled_triangle(), figure_eight(), annulus(),
                 rgg(20, 11), rgg(30, 12)]
    for idx, K in enumerate(complexes):
        lap = lap_of(K)
        delta = compute_delta(lap)
        lam1 = smallest_positive_eigenvalue(lap)
        bound = 1.0 - delta * lam1 + 0.05
        norms = update_norms(lap, initial_vector(K.edge_count, idx), delta, 120)
        floor = norms[0] * 1e-12
        ok_from = None
        for start in range(len(norms) - 1):
            tail = range(start, len(norms) - 1)
            if all(norms[k + 1] <= bound * norms[k] or norms[k + 1] < floor
                   for k in tail):
                ok_from = start
                break
        assert ok_from is not None and ok_from <= 10


def test_iteration_cap_attaches_partial_result():
    lap = lap_of(annulus())
    with pytest.raises(MaxIterationsExceeded) as info:
        iterate_harmonic(lap, HarmonicConfig(epsilon=1e-12, max_iterations=5))
    partial = info.value.result
    assert partial.iterations == 5
    assert partial.y.shape == (lap.shape[0],)
    assert partial.update_norm >= partial.threshold


def test_default_max_iterations_formula():
    assert default_max_iterations(10, 1e-6) == 600
    assert default_max_iterations(3, 1e-2) == 60
    assert default_max_iterations(5, 0.5) == 50
    assert default_max_iterations(5, 1.0) == 50
    assert default_max_iterations(0, 1e-6) == 1


def test_input_validation():
    lap = lap_of(hollow_triangle())
    with pytest.raises(ValueError):
        iterate_harmonic(lap, HarmonicConfig(epsilon=0.0))
    with pytest.raises(ValueError):
        iterate_harmonic(lap, HarmonicConfig(delta=-1.0))
    with pytest.raises(ValueError):
        iterate_harmonic(lap, HarmonicConfig(max_iterations=0))
    with pytest.raises(ValueError):
        iterate_harmonic(lap, y0=np.zeros(5))


def test_zero_edge_operator():
    from hodgegen import SimplicialComplex2

    lap = lap_of(SimplicialComplex2(1, []))
    with pytest.raises(ZeroMatrix):
        iterate_harmonic(lap)
    res = iterate_harmonic(lap, HarmonicConfig(delta=1.0))
    assert res.iterations == 0
    assert res.y.shape == (0,)


def test_reference_projection_cap():
    lap = lap_of(annulus())
    with pytest.raises(ScaleExceeded):
        project_onto_kernel_reference(lap, np.zeros(lap.shape[0]), cap=3)
    with pytest.raises(ScaleExceeded):
        smallest_positive_eigenvalue(lap, cap=3)


def test_smallest_positive_eigenvalue_known():
    lap = lap_of(hollow_triangle())
    assert abs(smallest_positive_eigenvalue(lap) - 3.0) < 1e-9
