"""Random geometric flag 2-complexes on the unit square and the trend
experiments that run on them.

Points are sampled uniformly, two points closer than the critical-regime
radius r = sqrt(k / (pi (n-1))) become an edge, and every 3-clique is
flagged as a triangle.  The radius targets an expected average degree of
k for interior points; boundary effects bias the realized mean low, which
the callers' tolerances absorb.  When the graph is disconnected the
largest component survives with an order-preserving reindex.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex2
from .errors import HodgegenError, TooSparse
from .rng import SplitMix64

log = logging.getLogger(__name__)


@dataclass
class GeomConfig:
    """Sampling parameters; the region is always the unit square."""

    n: int
    avg_degree: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.avg_degree > 0:
            raise ValueError("avg_degree must be positive")

    @property
    def radius(self) -> float:
        return math.sqrt(self.avg_degree / (math.pi * (self.n - 1)))


def sample_points(cfg: GeomConfig) -> np.ndarray:
    """(n, 2) uniform coordinates, two sequential draws per point."""
    stream = SplitMix64(cfg.seed)
    pts = np.empty((cfg.n, 2), dtype=np.float64)
    for i in range(cfg.n):
        pts[i, 0] = stream.next_unit()
        pts[i, 1] = stream.next_unit()
    return pts


def _components(n: int, neighbors: list) -> list[list[int]]:
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def generate(cfg: GeomConfig) -> SimplicialComplex2:
    """Sample one complex; raises TooSparse when no component has an edge.

    The returned complex is the largest connected component (ties to the
    one containing the smallest vertex id), reindexed order-preservingly.
    """
    pts = sample_points(cfg)
    n = cfg.n
    r2 = cfg.avg_degree / (math.pi * (n - 1))
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    close = (dx * dx + dy * dy) <= r2

    neighbors: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if close[i, j]:
                neighbors[i].append(j)
                neighbors[j].append(i)

    comps = _components(n, neighbors)
    comps.sort(key=lambda c: (-len(c), c[0]))
    keep = comps[0]
    if len(keep) < 2:
        raise TooSparse(
            f"largest component has {len(keep)} vertex; "
            f"raise avg_degree or n (r={cfg.radius:.4f})"
        )
    index = {v: i for i, v in enumerate(keep)}
    kept = set(keep)

    edges = []
    for v in keep:
        for w in neighbors[v]:
            if v < w and w in kept:
                edges.append((index[v], index[w]))
    edges.sort()

    nbr_new: list[set] = [set() for _ in range(len(keep))]
    for i, j in edges:
        nbr_new[i].add(j)
        nbr_new[j].add(i)
    triangles = []
    for i, j in edges:
        for k in sorted(nbr_new[i] & nbr_new[j]):
            if k > j:
                triangles.append((i, j, k))
    triangles.sort()

    return SimplicialComplex2(len(keep), edges, triangles)


def degree_stats(complex_: SimplicialComplex2):
    """(mean, variance, sum of squares) of the vertex degrees.

    The sums are exact integers; mean and population variance are floats.
    """
    degrees = np.asarray(complex_.degrees(), dtype=np.int64)
    n = complex_.vertex_count
    total = int(np.sum(degrees))
    sum_sq = int(np.sum(degrees ** 2))
    mean = total / n
    variance = sum_sq / n - mean * mean
    return mean, variance, sum_sq


def l1_nnz_expectation_check(samples, k: float, n: int | None = None):
    """Mean of the sparsity count sum(d_i^2) - sum(d_i)/2 across samples,
    next to the closed-form prediction 2k(k - 1/4)n.

    n defaults to the mean vertex count of the samples; the prediction
    treats the degree second moment as 2k^2, so it overshoots samples
    whose degree variance sits near k rather than k^2.
    """
    values = []
    sizes = []
    for K in samples:
        degrees = np.asarray(K.degrees(), dtype=np.int64)
        values.append(float(np.sum(degrees ** 2)) - 0.5 * float(np.sum(degrees)))
        sizes.append(K.vertex_count)
    if n is None:
        n = float(np.mean(sizes))
    empirical_mean = float(np.mean(values))
    formula = 2.0 * k * (k - 0.25) * n
    return empirical_mean, formula


def trial_seeds(seed_base: int, count: int) -> list[int]:
    """Independent per-trial seeds, a stable prefix of one stream."""
    stream = SplitMix64(seed_base)
    return [stream.spawn_seed() for _ in range(count)]


def excess_cycles_experiment(n_values, trials: int, avg_degree: float = 6.0,
                             seed_base: int = 0, mode: str = "distributed",
                             scheduling: str = "sync", epsilon: float = 1e-6):
    """Selected-versus-true cycle counts across sizes.

    Yields one row dict per (n, trial) in trial order with keys n, seed,
    b1, card_P, excess, iterations, messages_total and error (empty on
    success).  b1 comes from the exact rational oracle; card_P is the
    root's selection before rank reduction, so excess = card_P - b1 >= 0
    whenever classification is clean.  messages_total counts every charged
    transmission; the centralized mode leaves it and iterations' phase
    split at zero messages.
    """
    from .cyclebasis import PipelineConfig, run_centralized
    from .netsim import SimConfig, run_full_pipeline
    from .oracle import betti1

    n_values = list(n_values)
    seeds = trial_seeds(seed_base, len(n_values) * trials)
    idx = 0
    for n in n_values:
        for _t in range(trials):
            seed = seeds[idx]
            idx += 1
            row = {"n": n, "seed": seed, "b1": "", "card_P": "", "excess": "",
                   "iterations": "", "messages_total": "", "error": ""}
            try:
                K = generate(GeomConfig(n=n, avg_degree=avg_degree, seed=seed))
                cfg = PipelineConfig(epsilon=epsilon, seed=seed)
                if mode == "centralized":
                    result = run_centralized(K, cfg)
                    card = len(result.generators.P)
                    messages = 0
                else:
                    result, cost = run_full_pipeline(
                        K, cfg, SimConfig(scheduling=scheduling, seed=seed),
                        stop_after_selection=True,
                    )
                    card = len(result.generators.P)
                    messages = cost.grand_total("broadcasts")
                row["b1"] = betti1(K)
                row["card_P"] = card
                row["excess"] = card - row["b1"]
                row["iterations"] = sum(result.iterations_per_harmonic)
                row["messages_total"] = messages
            except HodgegenError as exc:
                row["error"] = type(exc).__name__
            yield row


def iterations_experiment(n: int = 200, avg_degree: float = 6.0,
                          geom_seed: int = 0, digits=range(2, 9),
                          trials: int = 100, seed_base: int = 0):
    """Iterations to quiescence versus requested decimal digits, on one
    fixed complex with fresh start vectors per trial.

    Yields row dicts with keys n, seed, digits, iterations and error.
    """
    from .complex import build_boundaries, build_laplacian
    from .harmonic import HarmonicConfig, iterate_harmonic

    K = generate(GeomConfig(n=n, avg_degree=avg_degree, seed=geom_seed))
    lap = build_laplacian(build_boundaries(K))
    seeds = trial_seeds(seed_base, trials)
    for d in digits:
        eps = 10.0 ** (-d)
        for seed in seeds:
            row = {"n": n, "seed": seed, "digits": d, "iterations": "", "error": ""}
            try:
                res = iterate_harmonic(lap, HarmonicConfig(epsilon=eps, seed=seed))
                row["iterations"] = res.iterations
            except HodgegenError as exc:
                row["error"] = type(exc).__name__
            yield row


def iterations_vs_n_experiment(n_values, avg_degree: float = 6.0,
                               digits: int = 6, trials: int = 20,
                               seed_base: int = 0):
    """Iterations to quiescence versus complex size at fixed precision.

    Yields row dicts with keys n, seed, digits, iterations and error.
    """
    from .complex import build_boundaries, build_laplacian
    from .harmonic import HarmonicConfig, iterate_harmonic

    eps = 10.0 ** (-digits)
    n_values = list(n_values)
    seeds = trial_seeds(seed_base, len(n_values) * trials)
    idx = 0
    for n in n_values:
        for _t in range(trials):
            seed = seeds[idx]
            idx += 1
            row = {"n": n, "seed": seed, "digits": digits, "iterations": "", "error": ""}
            try:
                K = generate(GeomConfig(n=n, avg_degree=avg_degree, seed=seed))
                lap = build_laplacian(build_boundaries(K))
                res = iterate_harmonic(lap, HarmonicConfig(epsilon=eps, seed=seed))
                row["iterations"] = res.iterations
            except HodgegenError as exc:
                row["error"] = type(exc).__name__
            yield row
