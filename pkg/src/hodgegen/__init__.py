"""Homology generating sets for simplicial 2-complexes via harmonic 1-forms.

The package builds boundary operators and the 1-Laplacian for a finite
2-complex, relaxes random cochains onto the harmonic subspace, labels the
fundamental cycles of a spanning tree by harmonic integrals, and reduces
the surviving representatives to an independent generating set.  The same
pipeline runs centralized or on a deterministic message-passing simulator,
and an exact rational oracle checks any claimed generating set.
"""

from .complex import (
    BoundaryOperators,
    Laplacian1,
    SimplicialComplex2,
    build_boundaries,
    build_laplacian,
    build_laplacian_combinatorial,
    dumps_sc,
    l1_one_norm,
    laplacians_equal,
    load_sc,
    loads_sc,
    save_sc,
)
from .cyclebasis import (
    CycleRecord,
    GeneratorSet,
    PipelineConfig,
    PipelineResult,
    SpanningTree,
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
)
from .errors import (
    ClosureViolation,
    Disconnected,
    HodgegenError,
    MaxIterationsExceeded,
    NonQuiescent,
    NotACycle,
    RankDeficientHarmonics,
    ScFormatError,
    TooSparse,
)
from .geomgraph import GeomConfig, generate
from .harmonic import (
    HarmonicConfig,
    HarmonicResult,
    compute_delta,
    default_max_iterations,
    initial_vector,
    iterate_harmonic,
)
from .kernels import BACKEND
from .netsim import (
    CostReport,
    SimConfig,
    run_distributed_harmonic,
    run_full_pipeline,
    run_max_gossip,
    run_spanning_tree,
)
from .oracle import BoundaryForm, betti1, verify_generating_set
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryForm",
    "BoundaryOperators",
    "ClosureViolation",
    "CostReport",
    "CycleRecord",
    "Disconnected",
    "GeneratorSet",
    "GeomConfig",
    "HarmonicConfig",
    "HarmonicResult",
    "HodgegenError",
    "Laplacian1",
    "MaxIterationsExceeded",
    "NonQuiescent",
    "NotACycle",
    "PipelineConfig",
    "PipelineResult",
    "RankDeficientHarmonics",
    "ScFormatError",
    "SimConfig",
    "SimplicialComplex2",
    "SplitMix64",
    "TooSparse",
    "betti1",
    "build_boundaries",
    "build_laplacian",
    "build_laplacian_combinatorial",
    "classify_cycles",
    "compute_delta",
    "cycle_from_nontree_edge",
    "cycle_integral",
    "default_max_iterations",
    "derive_seeds",
    "dumps_sc",
    "generate",
    "initial_vector",
    "iterate_harmonic",
    "l1_one_norm",
    "laplacians_equal",
    "load_sc",
    "loads_sc",
    "SpanningTree",
    "chain_from_json_cycle",
    "chain_to_json_cycle",
    "integral_function",
    "nontree_edges",
    "partition_homologous",
    "reduce_to_generators",
    "result_to_json",
    "run_centralized",
    "run_distributed_harmonic",
    "run_full_pipeline",
    "run_max_gossip",
    "run_spanning_tree",
    "save_sc",
    "select_representatives",
    "spanning_tree_bfs",
    "verify_generating_set",
    "__version__",
]
