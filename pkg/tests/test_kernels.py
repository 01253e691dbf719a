"""Relaxation kernels: backend equality, arithmetic order, stop semantics."""

import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import annulus, figure_eight, hollow_triangle, rgg

from hodgegen import build_boundaries, build_laplacian, kernels
from hodgegen import _pykernels
from hodgegen.rng import centered_vector

try:
    from hodgegen import _cykernels
except ImportError:
    _cykernels = None


def laplacians_for_tests():
    complexes = [hollow_triangle(), figure_eight(), annulus()]
    complexes += [rgg(n, 7 * n + 1) for n in (20, 35, 50)]
    return [build_laplacian(build_boundaries(K)) for K in complexes]


def reference_sweep(lap, y, delta):
    """In-test reimplementation: per row, accumulate in CSR order."""
    out = np.empty_like(y)
    worst = 0.0
    for i in range(lap.shape[0]):
        s = 0.0
        for p in range(lap.indptr[i], lap.indptr[i + 1]):
            s = s + lap.data[p] * y[lap.indices[p]]
        u = delta * s
        out[i] = y[i] - u
        worst = max(worst, abs(u))
    return out, worst


def test_sweep_matches_reference_order():
    for idx, lap in enumerate(laplacians_for_tests()):
        n = lap.shape[0]
        y = centered_vector(n, 1000 + idx)
        delta = 0.31
        want, want_worst = reference_sweep(lap, y, delta)
        out = np.empty_like(y)
        worst = kernels.sweep(lap.indptr, lap.indices, lap.data, y, out, delta)
        assert np.array_equal(out, want)
        assert worst == want_worst


@pytest.mark.skipif(_cykernels is None, reason="compiled backend unavailable")
def test_backends_bitwise_equal_sweep():
    for idx, lap in enumerate(laplacians_for_tests()):
        n = lap.shape[0]
        y = centered_vector(n, idx)
        delta = 1.0 / 7.0
        out_py = np.empty_like(y)
        out_cy = np.empty_like(y)
        for _ in range(25):
            w_py = _pykernels.sweep(lap.indptr, lap.indices, lap.data, y, out_py, delta)
            w_cy = _cykernels.sweep(lap.indptr, lap.indices, lap.data, y, out_cy, delta)
            assert w_py == w_cy
            assert np.array_equal(out_py, out_cy)
            y = out_py.copy()


@pytest.mark.skipif(_cykernels is None, reason="compiled backend unavailable")
def test_backends_bitwise_equal_run():
    for idx, lap in enumerate(laplacians_for_tests()):
        n = lap.shape[0]
        y_py = centered_vector(n, 50 + idx)
        y_cy = y_py.copy()
        work = np.empty_like(y_py)
        delta = 0.125
        args = (lap.indptr, lap.indices, lap.data)
        it_py, norm_py, ok_py = _pykernels.run(*args, y_py, work.copy(), delta, 1e-7, 4000)
        it_cy, norm_cy, ok_cy = _cykernels.run(*args, y_cy, work.copy(), delta, 1e-7, 4000)
        assert (it_py, ok_py) == (it_cy, ok_cy)
        assert norm_py == norm_cy
        assert np.array_equal(y_py, y_cy)


def test_run_matches_iterated_sweeps():
    lap = laplacians_for_tests()[2]
    n = lap.shape[0]
    y = centered_vector(n, 3)
    threshold = 1e-8
    steps = 0
    cur = y.copy()
    out = np.empty_like(cur)
    while True:
        worst = kernels.sweep(lap.indptr, lap.indices, lap.data, cur, out, 0.1)
        cur, out = out, cur
        steps += 1
        if worst < threshold or steps >= 5000:
            break
    y_run = y.copy()
    it, norm, ok = kernels.run(lap.indptr, lap.indices, lap.data, y_run,
                               np.empty_like(y_run), 0.1, threshold, 5000)
    assert ok
    assert it == steps
    assert norm == worst
    assert np.array_equal(y_run, cur)


def test_run_reports_nonconvergence():
    lap = laplacians_for_tests()[0]
    y = centered_vector(lap.shape[0], 9)
    it, norm, ok = kernels.run(lap.indptr, lap.indices, lap.data, y,
                               np.empty_like(y), 0.05, 1e-15, 3)
    assert not ok
    assert it == 3
    assert norm > 1e-15


def test_matvec_matches_reference():
    for idx, lap in enumerate(laplacians_for_tests()):
        n = lap.shape[0]
        x = centered_vector(n, 200 + idx)
        out = np.empty_like(x)
        kernels.matvec(lap.indptr, lap.indices, lap.data, x, out)
        want = np.empty_like(x)
        for i in range(n):
            s = 0.0
            for p in range(lap.indptr[i], lap.indptr[i + 1]):
                s = s + lap.data[p] * x[lap.indices[p]]
            want[i] = s
        assert np.array_equal(out, want)


def test_env_forces_pure_python_backend():
    code = "from hodgegen import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, HODGEGEN_PURE_PYTHON="1")
    got = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert got.stdout.strip() == "python"


@pytest.mark.skipif(_cykernels is None, reason="compiled backend unavailable")
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "compiled"
