"""Harmonic 1-forms by damped relaxation against the first Laplacian.

The iteration y_{k+1} = y_k - delta * L1 @ y_k converges to the orthogonal
projection of y_0 onto ker L1 exactly when 0 < delta < 2 / lambda_max.
The default step delta = 1 / ||L1||_1 always lies in that range because
the one norm bounds the spectral radius.  Iteration stops once the update
sup-norm falls below epsilon * delta, which is the same as requiring
||L1 @ y||_inf < epsilon; the distance to the true projection then scales
like epsilon over the smallest positive eigenvalue.

Start vectors are uniform in [-0.5, 0.5) per edge from the seeded
generator in rng, so every run is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .complex import Laplacian1, l1_one_norm
from .errors import MaxIterationsExceeded, ScaleExceeded, ZeroMatrix
from .rng import centered_vector

DENSE_REFERENCE_CAP = 500


@dataclass
class HarmonicConfig:
    """Knobs for one relaxation run.

    delta defaults to 1 / ||L1||_1; max_iterations defaults to
    10 * edge_count * digits where digits = ceil(-log10(epsilon)).
    """

    epsilon: float = 1e-6
    delta: float | None = None
    max_iterations: int | None = None
    seed: int = 0


@dataclass
class HarmonicResult:
    """Final iterate plus the run statistics needed downstream."""

    y: np.ndarray
    iterations: int
    delta: float
    update_norm: float
    threshold: float


def initial_vector(edge_count: int, seed: int) -> np.ndarray:
    """Seeded start vector, uniform in [-0.5, 0.5) per edge."""
    return centered_vector(edge_count, seed)


def compute_delta(lap: Laplacian1) -> float:
    """Default step size 1 / ||L1||_1; ZeroMatrix if the norm vanishes."""
    norm = l1_one_norm(lap)
    if norm == 0.0:
        raise ZeroMatrix("L1 has no nonzero entries, step size undefined")
    return 1.0 / norm


def default_max_iterations(edge_count: int, epsilon: float) -> int:
    """Iteration cap 10 * E * digits used when the config leaves it unset."""
    digits = max(1, math.ceil(-math.log10(epsilon)))
    return max(1, 10 * edge_count * digits)


def iterate_harmonic(
    lap: Laplacian1,
    config: HarmonicConfig | None = None,
    y0: np.ndarray | None = None,
) -> HarmonicResult:
    """Relax a start vector to a harmonic representative.

    Uses the seeded default start when y0 is None.  Raises
    MaxIterationsExceeded (with the partial result attached) when the cap
    is reached before the update norm passes the threshold.
    """
    cfg = config or HarmonicConfig()
    if not (cfg.epsilon > 0.0):
        raise ValueError("epsilon must be positive")
    edge_count = lap.shape[0]
    delta = cfg.delta if cfg.delta is not None else compute_delta(lap)
    if not (delta > 0.0):
        raise ValueError("delta must be positive")
    threshold = cfg.epsilon * delta

    if y0 is None:
        y = initial_vector(edge_count, cfg.seed)
    else:
        if len(y0) != edge_count:
            raise ValueError("start vector length does not match edge count")
        y = np.array(y0, dtype=np.float64, copy=True)
    if edge_count == 0:
        return HarmonicResult(y=y, iterations=0, delta=delta, update_norm=0.0,
                              threshold=threshold)

    cap = cfg.max_iterations
    if cap is None:
        cap = default_max_iterations(edge_count, cfg.epsilon)
    if cap < 1:
        raise ValueError("max_iterations must be at least 1")

    work = np.empty_like(y)
    iterations, update_norm, converged = kernels.run(
        lap.indptr, lap.indices, lap.data, y, work, delta, threshold, cap
    )
    result = HarmonicResult(y=y, iterations=int(iterations), delta=delta,
                            update_norm=float(update_norm), threshold=threshold)
    if not converged:
        raise MaxIterationsExceeded(
            f"no convergence within {cap} iterations "
            f"(last update norm {update_norm:.3e}, threshold {threshold:.3e})",
            result=result,
        )
    return result


def project_onto_kernel_reference(
    lap: Laplacian1, y0: np.ndarray, cap: int = DENSE_REFERENCE_CAP
) -> np.ndarray:
    """Dense eigendecomposition projection of y0 onto ker L1.

    Independent of the relaxation path; used to validate it.  Refuses
    inputs above cap edges (ScaleExceeded).
    """
    n = lap.shape[0]
    if n > cap:
        raise ScaleExceeded(f"dense reference capped at {cap} edges, got {n}")
    if len(y0) != n:
        raise ValueError("vector length does not match edge count")
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    w, v = np.linalg.eigh(lap.dense())
    lam_max = float(w[-1])
    if lam_max <= 0.0:
        return np.array(y0, dtype=np.float64, copy=True)
    tol = lam_max * n * np.finfo(np.float64).eps
    basis = v[:, w <= tol]
    return basis @ (basis.T @ np.asarray(y0, dtype=np.float64))


def smallest_positive_eigenvalue(lap: Laplacian1, cap: int = DENSE_REFERENCE_CAP) -> float:
    """Smallest positive eigenvalue via the dense route (validation only)."""
    n = lap.shape[0]
    if n > cap:
        raise ScaleExceeded(f"dense reference capped at {cap} edges, got {n}")
    if n == 0:
        raise ZeroMatrix("empty operator has no positive spectrum")
    w = np.linalg.eigvalsh(lap.dense())
    lam_max = float(w[-1])
    if lam_max <= 0.0:
        raise ZeroMatrix("operator is identically zero")
    tol = lam_max * n * np.finfo(np.float64).eps
    positive = w[w > tol]
    return float(positive[0])
