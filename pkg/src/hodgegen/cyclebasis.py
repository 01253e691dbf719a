"""Spanning-tree cycle bases, cycle labeling and generator extraction.

Every non-tree edge e = (v_j, v_k) determines the cycle that crosses e
from v_j to v_k and returns to v_j along tree paths through the lowest
common ancestor; its sparse chain has coefficient +1 on e and -1/+1 on the
tree edges according to traversal direction versus the ascending-id edge
orientation.  Integrals of a 1-form y against these cycles are evaluated
through the tree potential f (f at the root is 0, children accumulate the
signed edge value), so the integral of the cycle of e collapses to
(f[v_j] + y[e]) - f[v_k].

Cycles whose integral magnitude stays below an absolute-plus-relative
threshold are contractible; the rest are clustered by integral magnitude
(homologous cycles agree up to sign with probability one), one shortest
representative per cluster is kept, and a square system of integrals
against fresh harmonics is rank-reduced to drop dependent classes.

The same arithmetic expressions are reused verbatim by the message-passing
simulation, which keeps centralized and simulated runs bit-compatible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex2, build_boundaries, build_laplacian
from .errors import EdgeInTree, RankDeficientHarmonics
from .harmonic import HarmonicConfig, compute_delta, iterate_harmonic
from .rng import SplitMix64

TOL_ABS = 1e-4        # contractibility threshold, absolute part
TOL_REL = 1e-6        # contractibility threshold, per hop and unit of ||y||_inf
LABEL_REL = 1e-4      # relative gap closing two labels into one cluster
PIVOT_TOL = 1e-8      # rank threshold relative to the largest column norm


@dataclass(frozen=True)
class SpanningTree:
    """Rooted spanning tree with hop counts and tree-edge membership."""

    root: int
    parent: np.ndarray        # parent[v], -1 at the root
    hop: np.ndarray           # tree distance from the root
    parent_edge: np.ndarray   # edge id to the parent, -1 at the root
    is_tree_edge: np.ndarray  # bool per edge
    order: np.ndarray         # vertices in level order (ties by id)

    @property
    def vertex_count(self) -> int:
        return len(self.parent)


def spanning_tree_bfs(complex_: SimplicialComplex2, root: int | None = None) -> SpanningTree:
    """Breadth-first spanning tree; equal-depth parent ties go to the
    smallest neighbor id.  Default root is the largest vertex id."""
    n = complex_.vertex_count
    if root is None:
        root = n - 1
    if not (0 <= root < n):
        raise ValueError(f"root {root} out of range")
    parent = np.full(n, -1, dtype=np.int32)
    hop = np.full(n, -1, dtype=np.int32)
    parent_edge = np.full(n, -1, dtype=np.int32)
    hop[root] = 0
    order = [root]
    frontier = [root]
    while frontier:
        nxt = []
        for v in sorted(frontier):
            for w in complex_.neighbors[v]:
                if hop[w] < 0:
                    hop[w] = hop[v] + 1
                    parent[w] = v
                    parent_edge[w] = complex_.edge_id(v, w)
                    nxt.append(w)
        frontier = nxt
        order.extend(sorted(nxt))
    is_tree = np.zeros(complex_.edge_count, dtype=bool)
    for v in range(n):
        if parent_edge[v] >= 0:
            is_tree[parent_edge[v]] = True
    return SpanningTree(
        root=int(root),
        parent=parent,
        hop=hop,
        parent_edge=parent_edge,
        is_tree_edge=is_tree,
        order=np.asarray(order, dtype=np.int32),
    )


def nontree_edges(tree: SpanningTree) -> list[int]:
    """Ids of edges outside the tree, ascending."""
    return [e for e in range(len(tree.is_tree_edge)) if not tree.is_tree_edge[e]]


@dataclass
class CycleRecord:
    """One spanning-tree cycle and everything learned about it."""

    nontree_edge: int
    terminals: tuple[int, int]      # (v_j, v_k), the edge endpoints, v_j < v_k
    chain: dict = field(repr=False)  # edge id -> coefficient in {-1, +1}
    hop_length: int = 0
    integral: float = 0.0            # signed integral of the labeling 1-form
    label: float = 0.0               # |integral|
    label_vector: tuple = ()         # magnitudes under each labeling form


def cycle_from_nontree_edge(
    complex_: SimplicialComplex2, tree: SpanningTree, edge: int
) -> CycleRecord:
    """Chain of the tree cycle closed by a non-tree edge.

    Raises EdgeInTree when the edge belongs to the tree.
    """
    if tree.is_tree_edge[edge]:
        raise EdgeInTree(f"edge {edge} lies in the spanning tree")
    vj, vk = complex_.edges[edge]
    chain = {edge: 1}

    a, b = vk, vj
    # climb to equal depth, then in lockstep to the common ancestor
    up_a = []  # vertices whose parent edge is traversed child -> parent
    up_b = []  # vertices whose parent edge is traversed parent -> child
    while tree.hop[a] > tree.hop[b]:
        up_a.append(a)
        a = tree.parent[a]
    while tree.hop[b] > tree.hop[a]:
        up_b.append(b)
        b = tree.parent[b]
    while a != b:
        up_a.append(a)
        up_b.append(b)
        a = tree.parent[a]
        b = tree.parent[b]

    hops = 1 + len(up_a) + len(up_b)
    for u in up_a:  # path v_k -> ancestor, direction child to parent
        p = tree.parent[u]
        chain[int(tree.parent_edge[u])] = 1 if u < p else -1
    for w in up_b:  # path ancestor -> v_j, direction parent to child
        p = tree.parent[w]
        chain[int(tree.parent_edge[w])] = 1 if p < w else -1

    return CycleRecord(
        nontree_edge=edge,
        terminals=(int(vj), int(vk)),
        chain=chain,
        hop_length=hops,
    )


def integral_function(
    complex_: SimplicialComplex2, tree: SpanningTree, y: np.ndarray
) -> np.ndarray:
    """Tree potential of a 1-form: zero at the root, children accumulate
    the edge value signed by traversal direction versus orientation."""
    f = np.zeros(complex_.vertex_count, dtype=np.float64)
    for v in tree.order[1:]:
        p = int(tree.parent[v])
        e = int(tree.parent_edge[v])
        sy = y[e] if p < v else -y[e]
        f[v] = f[p] + sy
    return f


def cycle_integral(f_vj: float, y_e: float, f_vk: float) -> float:
    """Integral of the tree cycle of edge (v_j, v_k) from the potential."""
    return (f_vj + y_e) - f_vk


def contractibility_threshold(
    ynorm_inf: float, hop_length: int, tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL
) -> float:
    """Magnitude below which a cycle integral counts as zero."""
    return tol_abs + tol_rel * ynorm_inf * hop_length


def classify_cycles(
    records,
    ynorm_inf,
    tol_abs: float = TOL_ABS,
    tol_rel: float = TOL_REL,
):
    """Split records into (contractible, noncontractible) by label size.

    ynorm_inf is one norm per labeling form; a record is contractible only
    if every component of its label vector clears its threshold test.
    """
    norms = np.atleast_1d(np.asarray(ynorm_inf, dtype=np.float64))
    contractible, noncontractible = [], []
    for rec in records:
        labels = rec.label_vector if rec.label_vector else (rec.label,)
        small = all(
            lab < contractibility_threshold(float(norms[c]), rec.hop_length, tol_abs, tol_rel)
            for c, lab in enumerate(labels)
        )
        (contractible if small else noncontractible).append(rec)
    return contractible, noncontractible


def _labels_close(a, b, rel: float) -> bool:
    return all(abs(x - y) <= rel * max(abs(x), abs(y)) for x, y in zip(a, b))


def partition_homologous(records, rel: float = LABEL_REL):
    """Cluster records by label, single linkage on the sorted sequence.

    Homologous cycles share the same integral magnitude up to numerical
    noise; distinct classes separate by far more than the relative gap.
    Returns clusters sorted by label, each sorted by (hop_length, edge).
    """
    recs = sorted(records, key=lambda r: (r.label, r.hop_length, r.nontree_edge))
    clusters: list[list[CycleRecord]] = []
    prev = None
    for rec in recs:
        vec = rec.label_vector if rec.label_vector else (rec.label,)
        if prev is not None and _labels_close(prev, vec, rel):
            clusters[-1].append(rec)
        else:
            clusters.append([rec])
        prev = vec
    for cluster in clusters:
        cluster.sort(key=lambda r: (r.hop_length, r.nontree_edge))
    return clusters


def select_representatives(clusters) -> list[CycleRecord]:
    """Shortest member of each cluster, returned by (hop_length, edge)."""
    reps = [cluster[0] for cluster in clusters if cluster]
    reps.sort(key=lambda r: (r.hop_length, r.nontree_edge))
    return reps


@dataclass
class GeneratorSet:
    """Representatives, their integral matrix and the independent subset."""

    P: list
    R: np.ndarray        # m x |P|, row i integrates harmonic i
    H: list
    kept: list


def _mgs_rank(columns: np.ndarray, pivot_tol: float):
    """Kept column indices under modified Gram-Schmidt with a relative
    pivot threshold; returns (kept, threshold)."""
    m, p = columns.shape
    if p == 0:
        return [], 0.0
    norms = [float(np.linalg.norm(columns[:, j])) for j in range(p)]
    biggest = max(norms)
    threshold = pivot_tol * biggest
    kept: list[int] = []
    basis: list[np.ndarray] = []
    for j in range(p):
        v = columns[:, j].astype(np.float64, copy=True)
        for q in basis:
            v -= (q @ v) * q
        norm = float(np.linalg.norm(v))
        if norm > threshold:
            kept.append(j)
            basis.append(v / norm)
    return kept, threshold


def reduce_to_generators(
    P,
    harmonics,
    pivot_tol: float = PIVOT_TOL,
    R: np.ndarray | None = None,
    rank_check: bool = True,
) -> GeneratorSet:
    """Drop dependent classes from P by rank-reducing its integral matrix.

    harmonics is a sequence of m >= |P| 1-forms; R defaults to the direct
    dot products harmonic_i . chain_j but callers may pass a matrix built
    through tree potentials instead.  Raises RankDeficientHarmonics when
    the harmonics themselves span fewer dimensions than the kept set.
    """
    P = list(P)
    m = len(P)
    if m == 0:
        return GeneratorSet(P=[], R=np.zeros((0, 0)), H=[], kept=[])
    ys = [np.asarray(y, dtype=np.float64) for y in harmonics[:m]]
    if len(ys) < m:
        raise ValueError(f"need {m} harmonics, got {len(ys)}")
    if R is None:
        R = np.empty((m, m), dtype=np.float64)
        for i, y in enumerate(ys):
            for j, rec in enumerate(P):
                acc = 0.0
                for e in sorted(rec.chain):
                    acc += rec.chain[e] * y[e]
                R[i, j] = acc
    kept, _ = _mgs_rank(np.asarray(R, dtype=np.float64), pivot_tol)
    if rank_check and ys:
        ymat = np.stack(ys, axis=1)
        yrank, _ = _mgs_rank(ymat, pivot_tol)
        if len(yrank) < len(kept):
            raise RankDeficientHarmonics(
                f"harmonics span {len(yrank)} dimensions, "
                f"kept {len(kept)} representatives"
            )
    return GeneratorSet(P=P, R=np.asarray(R), H=[P[j] for j in kept], kept=kept)


@dataclass
class PipelineConfig:
    """Settings shared by the centralized and simulated pipelines."""

    epsilon: float = 1e-6
    delta: float | None = None
    max_iterations: int | None = None
    seed: int = 0
    root: int | None = None
    tol_abs: float = TOL_ABS
    tol_rel: float = TOL_REL
    label_rel: float = LABEL_REL
    pivot_tol: float = PIVOT_TOL
    label_harmonics: int = 1


@dataclass
class PipelineResult:
    """Everything the centralized run produces."""

    complex_: SimplicialComplex2
    tree: SpanningTree
    delta: float | None
    records: list
    contractible: list
    generators: GeneratorSet
    iterations_per_harmonic: list
    ynorm_inf: tuple

    @property
    def betti1_estimate(self) -> int:
        return len(self.generators.H)


def derive_seeds(master_seed: int, count: int) -> list[int]:
    """Per-harmonic seeds; a prefix of the same master stream every time."""
    stream = SplitMix64(master_seed)
    return [stream.spawn_seed() for _ in range(count)]


def run_centralized(
    complex_: SimplicialComplex2, config: PipelineConfig | None = None
) -> PipelineResult:
    """Full single-process pipeline from complex to generating set."""
    cfg = config or PipelineConfig()
    if cfg.label_harmonics < 1:
        raise ValueError("label_harmonics must be at least 1")
    tree = spanning_tree_bfs(complex_, cfg.root)
    open_edges = nontree_edges(tree)

    if complex_.edge_count == 0:
        return PipelineResult(
            complex_=complex_, tree=tree, delta=None, records=[], contractible=[],
            generators=GeneratorSet(P=[], R=np.zeros((0, 0)), H=[], kept=[]),
            iterations_per_harmonic=[], ynorm_inf=(),
        )

    lap = build_laplacian(build_boundaries(complex_))
    delta = cfg.delta if cfg.delta is not None else compute_delta(lap)

    k = cfg.label_harmonics
    seeds = derive_seeds(cfg.seed, k)
    results = [
        iterate_harmonic(
            lap,
            HarmonicConfig(epsilon=cfg.epsilon, delta=delta,
                           max_iterations=cfg.max_iterations, seed=s),
        )
        for s in seeds
    ]
    iterations = [r.iterations for r in results]
    potentials = [integral_function(complex_, tree, r.y) for r in results]
    ynorms = tuple(float(np.max(np.abs(r.y))) if len(r.y) else 0.0 for r in results)

    records = []
    for e in open_edges:
        rec = cycle_from_nontree_edge(complex_, tree, e)
        vj, vk = rec.terminals
        vec = tuple(
            cycle_integral(float(potentials[c][vj]), float(results[c].y[e]),
                           float(potentials[c][vk]))
            for c in range(k)
        )
        rec.integral = vec[0]
        rec.label = abs(vec[0])
        rec.label_vector = tuple(abs(x) for x in vec)
        records.append(rec)

    contractible, noncontractible = classify_cycles(
        records, ynorms, cfg.tol_abs, cfg.tol_rel
    )
    clusters = partition_homologous(noncontractible, cfg.label_rel)
    reps = select_representatives(clusters)

    m = len(reps)
    if m == 0:
        gens = GeneratorSet(P=[], R=np.zeros((0, 0)), H=[], kept=[])
        return PipelineResult(
            complex_=complex_, tree=tree, delta=delta, records=records,
            contractible=contractible, generators=gens,
            iterations_per_harmonic=iterations, ynorm_inf=ynorms,
        )

    if m > len(results):
        more_seeds = derive_seeds(cfg.seed, m)[len(results):]
        for s in more_seeds:
            res = iterate_harmonic(
                lap,
                HarmonicConfig(epsilon=cfg.epsilon, delta=delta,
                               max_iterations=cfg.max_iterations, seed=s),
            )
            results.append(res)
            iterations.append(res.iterations)
            potentials.append(integral_function(complex_, tree, res.y))

    R = np.empty((m, m), dtype=np.float64)
    for i in range(m):
        y = results[i].y
        f = potentials[i]
        for j, rec in enumerate(reps):
            vj, vk = rec.terminals
            R[i, j] = cycle_integral(float(f[vj]), float(y[rec.nontree_edge]), float(f[vk]))
    gens = reduce_to_generators(
        reps, [r.y for r in results[:m]], cfg.pivot_tol, R=R
    )
    return PipelineResult(
        complex_=complex_, tree=tree, delta=delta, records=records,
        contractible=contractible, generators=gens,
        iterations_per_harmonic=iterations, ynorm_inf=ynorms,
    )


def chain_to_json_cycle(complex_: SimplicialComplex2, rec: CycleRecord) -> dict:
    """Serializable form of one cycle: sorted edges, aligned signs."""
    edges, signs = [], []
    for e in sorted(rec.chain):
        i, j = complex_.edges[e]
        edges.append([int(i), int(j)])
        signs.append(int(rec.chain[e]))
    return {
        "edges": edges,
        "signs": signs,
        "label": float(rec.label),
        "hop_length": int(rec.hop_length),
    }


def result_to_json(result: PipelineResult) -> dict:
    """Primary output document for a pipeline run."""
    return {
        "betti1_estimate": result.betti1_estimate,
        "cycles": [
            chain_to_json_cycle(result.complex_, rec) for rec in result.generators.H
        ],
        "iterations_per_harmonic": [int(x) for x in result.iterations_per_harmonic],
        "delta": result.delta,
    }


def chain_from_json_cycle(complex_: SimplicialComplex2, doc: dict) -> dict:
    """Rebuild a sparse chain from its serialized edges and signs."""
    edges = doc["edges"]
    signs = doc["signs"]
    if len(edges) != len(signs):
        raise ValueError("edges and signs differ in length")
    chain = {}
    for (i, j), s in zip(edges, signs):
        chain[complex_.edge_id(int(i), int(j))] = int(s)
    return chain
