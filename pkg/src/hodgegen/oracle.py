"""Exact rational homology oracle for validating the floating pipeline.

All arithmetic here is exact (gmpy2 rationals when available, stdlib
Fraction otherwise), so every answer is ground truth rather than an
estimate.  The workhorse is a sparse column echelon keyed by the largest
nonzero index of each stored column.  Reducing a query vector against the
echelon until it has no entry at any pivot index yields a canonical
residue: two vectors get the same residue exactly when they differ by an
element of the stored column span.  That turns boundary membership and
homology comparisons into residue (in)equality.

Chains are sparse dicts mapping edge id to integer (or rational)
coefficient; zero coefficients are never stored.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .complex import BoundaryOperators, SimplicialComplex2, build_boundaries
from .errors import NotACycle

try:
    from gmpy2 import mpq as _RAT

    RATIONAL_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - environment without gmpy2
    _RAT = Fraction
    RATIONAL_BACKEND = "fractions"


class ColumnEchelon:
    """Sparse echelon basis of a growing column span, exact arithmetic.

    Stored columns are normalized to a unit coefficient at their pivot
    (largest nonzero) index and pivot indices are pairwise distinct.
    """

    def __init__(self):
        self.columns: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.columns)

    def _reduce(self, vec: dict) -> dict:
        """Clear every pivot index from vec, highest first; mutates vec."""
        columns = self.columns
        heap = [-p for p in vec if p in columns]
        heapq.heapify(heap)
        while heap:
            p = -heapq.heappop(heap)
            coeff = vec.get(p)
            if coeff is None or coeff == 0:
                continue
            col = columns.get(p)
            if col is None:
                continue
            for idx, val in col.items():
                acc = vec.get(idx, 0) - coeff * val
                if acc == 0:
                    vec.pop(idx, None)
                else:
                    vec[idx] = acc
                    if idx < p and idx in columns:
                        heapq.heappush(heap, -idx)
        return vec

    def residue(self, vec: dict) -> dict:
        """Canonical representative of vec modulo the stored span."""
        return self._reduce({k: _RAT(v) for k, v in vec.items() if v != 0})

    def add(self, vec: dict) -> bool:
        """Insert vec's residue if nonzero; True when the rank grew."""
        red = self.residue(vec)
        if not red:
            return False
        pivot = max(red)
        lead = red[pivot]
        col = {idx: val / lead for idx, val in red.items()}
        self.columns[pivot] = col
        return True


def _as_boundaries(obj) -> BoundaryOperators:
    """Accept a complex or its boundary operators interchangeably."""
    if isinstance(obj, SimplicialComplex2):
        return build_boundaries(obj)
    return obj


def d1_columns(boundaries: BoundaryOperators):
    """Vertex-boundary columns of the edges, as sparse dicts."""
    for e in range(boundaries.edge_count):
        yield dict(boundaries.d1_column(e))


def d2_columns(boundaries: BoundaryOperators):
    """Edge-boundary columns of the triangles, as sparse dicts."""
    for t in range(boundaries.triangle_count):
        yield dict(boundaries.d2_column(t))


def rank_of_columns(columns) -> int:
    """Exact rank of a sparse column family."""
    ech = ColumnEchelon()
    for col in columns:
        ech.add(col)
    return ech.rank


def betti1(complex_or_boundaries) -> int:
    """First Betti number (E - rank d1) - rank d2, all ranks exact."""
    boundaries = _as_boundaries(complex_or_boundaries)
    cycles = boundaries.edge_count - rank_of_columns(d1_columns(boundaries))
    return cycles - rank_of_columns(d2_columns(boundaries))


def is_cycle(boundaries: BoundaryOperators, chain: dict) -> bool:
    """Whether the 1-chain has zero vertex boundary."""
    return not boundaries.apply_d1(chain)


def _require_cycle(boundaries: BoundaryOperators, chain: dict, what: str):
    if not is_cycle(boundaries, chain):
        raise NotACycle(f"{what} has nonzero vertex boundary")


class BoundaryForm:
    """Precomputed echelon of the triangle boundary columns.

    Build once per complex and reuse for many membership or homology
    queries; each query costs one canonical reduction.
    """

    def __init__(self, boundaries):
        boundaries = _as_boundaries(boundaries)
        self.boundaries = boundaries
        self.echelon = ColumnEchelon()
        for col in d2_columns(boundaries):
            self.echelon.add(col)

    @property
    def rank_d2(self) -> int:
        return self.echelon.rank

    def residue(self, chain: dict) -> dict:
        return self.echelon.residue(chain)

    def residue_key(self, chain: dict):
        """Hashable canonical residue, for grouping chains by class."""
        red = self.residue(chain)
        return tuple(sorted((idx, str(val)) for idx, val in red.items()))

    def is_boundary(self, chain: dict) -> bool:
        """Whether a cycle bounds; NotACycle if it is not a cycle."""
        _require_cycle(self.boundaries, chain, "chain")
        return not self.residue(chain)

    def are_homologous(self, chain_a: dict, chain_b: dict) -> bool:
        """Whether two cycles differ by a triangle boundary."""
        _require_cycle(self.boundaries, chain_a, "first chain")
        _require_cycle(self.boundaries, chain_b, "second chain")
        return self.residue(chain_a) == self.residue(chain_b)


def is_boundary(boundaries: BoundaryOperators, chain: dict) -> bool:
    """One-shot boundary membership; builds the echelon each call."""
    return BoundaryForm(boundaries).is_boundary(chain)


def are_homologous(boundaries: BoundaryOperators, chain_a: dict, chain_b: dict) -> bool:
    """One-shot homology comparison; builds the echelon each call."""
    return BoundaryForm(boundaries).are_homologous(chain_a, chain_b)


def chain_neg(chain: dict) -> dict:
    """Negated sparse chain."""
    return {k: -v for k, v in chain.items()}


@dataclass
class VerifyReport:
    """Outcome of checking a candidate homology generating set."""

    ok: bool
    betti1: int
    set_size: int
    rank_d2: int
    rank_augmented: int

    def __str__(self):
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status}: |H|={self.set_size} betti1={self.betti1} "
            f"rank(d2)={self.rank_d2} rank([d2|H])={self.rank_augmented}"
        )


def verify_generating_set(boundaries: BoundaryOperators, chains) -> VerifyReport:
    """Check that chains are cycles spanning the first homology exactly.

    Passes when every chain is a cycle, the chains are independent modulo
    triangle boundaries (rank grows by one per chain) and their count
    equals the first Betti number.
    """
    boundaries = _as_boundaries(boundaries)
    chains = list(chains)
    for pos, chain in enumerate(chains):
        _require_cycle(boundaries, chain, f"chain {pos}")
    ech = ColumnEchelon()
    for col in d2_columns(boundaries):
        ech.add(col)
    rank_d2 = ech.rank
    for chain in chains:
        ech.add(chain)
    rank_aug = ech.rank
    cycles = boundaries.edge_count - rank_of_columns(d1_columns(boundaries))
    b1 = cycles - rank_d2
    ok = rank_aug == rank_d2 + len(chains) and len(chains) == b1
    return VerifyReport(
        ok=ok,
        betti1=b1,
        set_size=len(chains),
        rank_d2=rank_d2,
        rank_augmented=rank_aug,
    )
