"""Simplicial 2-complexes, boundary operators and the first Laplacian.

Orientation conventions used everywhere in the package:

* edges are stored as (i, j) with i < j and oriented from i to j, so the
  vertex boundary column of an edge carries -1 at i and +1 at j;
* triangles are stored as (i, j, k) with i < j < k and their edge boundary
  column carries +1 on (j, k), -1 on (i, k), +1 on (i, j).

With these signs d1 @ d2 == 0 holds exactly in integer arithmetic.  The
first Laplacian L1 = d2 @ d2.T + d1.T @ d1 is assembled twice, once
algebraically from the operators and once from the direct adjacency rule
(diagonal = triangle degree + 2, off-diagonal +-1 for edge pairs that share
a vertex but no triangle); the two builders must agree entry for entry.

Complexes are immutable after construction.  All derived adjacency tables
are precomputed once and shared read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClosureViolation, Disconnected, ScFormatError

D2_SIGNS = (1, -1, 1)  # signs on edges [(i,j), (i,k), (j,k)] of a triangle


class SimplicialComplex2:
    """Validated 2-skeleton: vertices 0..n-1, sorted edges, sorted triangles.

    Raises ClosureViolation if a triangle lacks one of its edges, and
    Disconnected if the 1-skeleton is not connected.  Vertex ids must be
    dense (every id in range is a vertex; isolated vertices are allowed
    only when vertex_count == 1).
    """

    def __init__(self, vertex_count, edges, triangles=()):
        n = int(vertex_count)
        if n < 1:
            raise ValueError("vertex_count must be at least 1")
        edges = tuple((int(i), int(j)) for i, j in edges)
        triangles = tuple((int(i), int(j), int(k)) for i, j, k in triangles)

        prev = None
        for i, j in edges:
            if not (0 <= i < j < n):
                raise ValueError(f"edge ({i},{j}) out of range or not i<j")
            if prev is not None and (i, j) <= prev:
                raise ValueError(f"edges not sorted/unique at ({i},{j})")
            prev = (i, j)
        prev = None
        for i, j, k in triangles:
            if not (0 <= i < j < k < n):
                raise ValueError(f"triangle ({i},{j},{k}) out of range or not i<j<k")
            if prev is not None and (i, j, k) <= prev:
                raise ValueError(f"triangles not sorted/unique at ({i},{j},{k})")
            prev = (i, j, k)

        self.vertex_count = n
        self.edges = edges
        self.triangles = triangles
        self.edge_index = {pair: idx for idx, pair in enumerate(edges)}
        self.triangle_set = frozenset(triangles)

        for i, j, k in triangles:
            for pair in ((i, j), (i, k), (j, k)):
                if pair not in self.edge_index:
                    raise ClosureViolation(
                        f"triangle ({i},{j},{k}) needs missing edge {pair}"
                    )

        neighbors: list[list[int]] = [[] for _ in range(n)]
        incident: list[list[int]] = [[] for _ in range(n)]
        for idx, (i, j) in enumerate(edges):
            neighbors[i].append(j)
            neighbors[j].append(i)
            incident[i].append(idx)
            incident[j].append(idx)
        self.neighbors = [sorted(adj) for adj in neighbors]
        self.incident_edges = incident  # ascending edge id per vertex

        self.triangle_edges = tuple(
            (self.edge_index[(i, j)], self.edge_index[(i, k)], self.edge_index[(j, k)])
            for i, j, k in triangles
        )
        upper = [0] * len(edges)
        for eij, eik, ejk in self.triangle_edges:
            upper[eij] += 1
            upper[eik] += 1
            upper[ejk] += 1
        self.upper_degree = tuple(upper)

        self._check_connected()

    def _check_connected(self):
        n = self.vertex_count
        if n == 1:
            return
        seen = [False] * n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for w in self.neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        if count != n:
            raise Disconnected(f"1-skeleton has {n - count} unreachable vertices")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def edge_id(self, i: int, j: int) -> int:
        """Index of edge (min(i,j), max(i,j)); KeyError if absent."""
        return self.edge_index[(i, j) if i < j else (j, i)]

    def degrees(self) -> list[int]:
        """Vertex degrees in the 1-skeleton."""
        return [len(adj) for adj in self.neighbors]

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialComplex2)
            and self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.triangles == other.triangles
        )

    def __hash__(self):
        return hash((self.vertex_count, self.edges, self.triangles))

    def __repr__(self):
        return (
            f"SimplicialComplex2(n={self.vertex_count}, "
            f"edges={len(self.edges)}, triangles={len(self.triangles)})"
        )


@dataclass(frozen=True)
class BoundaryOperators:
    """Sparse integer boundary maps of a 2-complex.

    d1 is vertex_count x edge_count with column e = (i, j) holding -1 at i
    and +1 at j; it is stored as the (E, 2) endpoint array edge_vertices.
    d2 is edge_count x triangle_count with column t = (i, j, k) holding
    D2_SIGNS on the edge rows [(i,j), (i,k), (j,k)]; it is stored as the
    (T, 3) edge-id array triangle_edges.
    """

    vertex_count: int
    edge_vertices: np.ndarray
    triangle_edges: np.ndarray

    @property
    def edge_count(self) -> int:
        return self.edge_vertices.shape[0]

    @property
    def triangle_count(self) -> int:
        return self.triangle_edges.shape[0]

    def d1_column(self, e: int):
        """((vertex, coeff), (vertex, coeff)) for edge e."""
        i, j = self.edge_vertices[e]
        return ((int(i), -1), (int(j), 1))

    def d2_column(self, t: int):
        """Tuple of (edge id, coeff) for triangle t."""
        es = self.triangle_edges[t]
        return tuple((int(es[a]), D2_SIGNS[a]) for a in range(3))

    def dense_d1(self) -> np.ndarray:
        """Dense int64 copy of d1 (small inputs only)."""
        out = np.zeros((self.vertex_count, self.edge_count), dtype=np.int64)
        for e in range(self.edge_count):
            i, j = self.edge_vertices[e]
            out[i, e] = -1
            out[j, e] = 1
        return out

    def dense_d2(self) -> np.ndarray:
        """Dense int64 copy of d2 (small inputs only)."""
        out = np.zeros((self.edge_count, self.triangle_count), dtype=np.int64)
        for t in range(self.triangle_count):
            for e, s in self.d2_column(t):
                out[e, t] = s
        return out

    def apply_d1(self, chain: dict) -> dict:
        """Boundary of a sparse 1-chain as a vertex -> coefficient dict."""
        out: dict = {}
        for e, c in chain.items():
            if c == 0:
                continue
            i, j = self.edge_vertices[e]
            for v, s in ((int(i), -c), (int(j), c)):
                acc = out.get(v, 0) + s
                if acc == 0:
                    out.pop(v, None)
                else:
                    out[v] = acc
        return out

    def composition_is_zero(self) -> bool:
        """Exact check that d1 @ d2 vanishes, column by column."""
        for t in range(self.triangle_count):
            acc: dict = {}
            for e, s in self.d2_column(t):
                i, j = self.edge_vertices[e]
                for v, c in ((int(i), -s), (int(j), s)):
                    val = acc.get(v, 0) + c
                    if val == 0:
                        acc.pop(v, None)
                    else:
                        acc[v] = val
            if acc:
                return False
        return True


@dataclass(frozen=True)
class Laplacian1:
    """First combinatorial Laplacian in CSR form, symmetric, float64 data.

    Row indices are edge ids; indices within each row are ascending.  The
    float data holds exact small integers, so equality comparisons between
    independently built copies are meaningful.
    """

    shape: tuple[int, int]
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.indices.shape[0])

    def row(self, i: int):
        """(column ids, values) views for row i; O(row nnz)."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def dense(self) -> np.ndarray:
        """Dense float64 copy (small inputs only)."""
        n = self.shape[0]
        out = np.zeros((n, n), dtype=np.float64)
        for i in range(n):
            cols, vals = self.row(i)
            out[i, cols] = vals
        return out


def _csr_from_rows(rows: list[dict], n: int) -> Laplacian1:
    """Assemble CSR from per-row {col: int value} dicts, ascending columns."""
    indptr = np.zeros(n + 1, dtype=np.int32)
    cols: list[int] = []
    vals: list[float] = []
    for i in range(n):
        row = rows[i]
        for c in sorted(row):
            v = row[c]
            if v != 0:
                cols.append(c)
                vals.append(float(v))
        indptr[i + 1] = len(cols)
    return Laplacian1(
        shape=(n, n),
        indptr=indptr,
        indices=np.asarray(cols, dtype=np.int32),
        data=np.asarray(vals, dtype=np.float64),
    )


def build_boundaries(complex_: SimplicialComplex2) -> BoundaryOperators:
    """Boundary operators of a validated complex."""
    ev = np.asarray(complex_.edges, dtype=np.int32).reshape(-1, 2)
    te = np.asarray(complex_.triangle_edges, dtype=np.int32).reshape(-1, 3)
    return BoundaryOperators(
        vertex_count=complex_.vertex_count, edge_vertices=ev, triangle_edges=te
    )


def build_laplacian(boundaries: BoundaryOperators) -> Laplacian1:
    """L1 = d2 @ d2.T + d1.T @ d1 assembled exactly in integers."""
    m = boundaries.edge_count
    rows: list[dict] = [{} for _ in range(m)]

    # down part: entry (a, b) is the product of the two coefficients at the
    # shared vertex; each edge meets itself at both endpoints, giving 2.
    incident: list[list[tuple[int, int]]] = [[] for _ in range(boundaries.vertex_count)]
    for e in range(m):
        for v, c in boundaries.d1_column(e):
            incident[v].append((e, c))
    for entries in incident:
        for x in range(len(entries)):
            a, ca = entries[x]
            rows[a][a] = rows[a].get(a, 0) + ca * ca
            for y in range(x + 1, len(entries)):
                b, cb = entries[y]
                prod = ca * cb
                rows[a][b] = rows[a].get(b, 0) + prod
                rows[b][a] = rows[b].get(a, 0) + prod

    # up part: each triangle column contributes the sign product for every
    # ordered pair of its three edges.
    for t in range(boundaries.triangle_count):
        col = boundaries.d2_column(t)
        for a, sa in col:
            for b, sb in col:
                rows[a][b] = rows[a].get(b, 0) + sa * sb

    return _csr_from_rows(rows, m)


def build_laplacian_combinatorial(complex_: SimplicialComplex2) -> Laplacian1:
    """L1 from the adjacency rule, bypassing the boundary operators.

    diagonal(e) = (number of triangles on e) + 2; off-diagonal (a, b) is
    the product of the two incidence coefficients at the shared vertex when
    a and b share a vertex but no triangle, else 0.
    """
    m = complex_.edge_count
    rows: list[dict] = [{} for _ in range(m)]
    for e in range(m):
        rows[e][e] = complex_.upper_degree[e] + 2

    edges = complex_.edges
    tset = complex_.triangle_set
    for v in range(complex_.vertex_count):
        inc = complex_.incident_edges[v]
        for x in range(len(inc)):
            a = inc[x]
            ia, ja = edges[a]
            ca = -1 if v == ia else 1
            oa = ja if v == ia else ia
            for y in range(x + 1, len(inc)):
                b = inc[y]
                ib, jb = edges[b]
                cb = -1 if v == ib else 1
                ob = jb if v == ib else ib
                tri = tuple(sorted((v, oa, ob)))
                if tri in tset:
                    continue
                prod = ca * cb
                rows[a][b] = prod
                rows[b][a] = prod

    return _csr_from_rows(rows, m)


def l1_one_norm(lap: Laplacian1) -> float:
    """Max absolute column sum; column partials accumulate in row order."""
    n = lap.shape[0]
    colsum = [0.0] * n
    for i in range(n):
        cols, vals = lap.row(i)
        for p in range(len(cols)):
            colsum[cols[p]] += abs(vals[p])
    return max(colsum) if n else 0.0


def laplacians_equal(a: Laplacian1, b: Laplacian1) -> bool:
    """Structural and numeric equality of two CSR Laplacians."""
    return (
        a.shape == b.shape
        and np.array_equal(a.indptr, b.indptr)
        and np.array_equal(a.indices, b.indices)
        and np.array_equal(a.data, b.data)
    )


def loads_sc(text: str) -> SimplicialComplex2:
    """Parse the plain-text complex format.

    Records: one "v N" line first, then "e i j" lines sorted ascending,
    then "t i j k" lines sorted ascending.  Lines starting with '#' and
    blank lines are ignored.  Unsorted, duplicate or malformed records
    raise ScFormatError.
    """
    n = None
    edges: list[tuple[int, int]] = []
    triangles: list[tuple[int, int, int]] = []
    stage = 0  # 0: expect v, 1: edges, 2: triangles
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise ScFormatError(f"line {lineno}: non-integer field") from exc
        if kind == "v":
            if stage != 0 or n is not None:
                raise ScFormatError(f"line {lineno}: unexpected v record")
            if len(nums) != 1 or nums[0] < 1:
                raise ScFormatError(f"line {lineno}: bad vertex count")
            n = nums[0]
            stage = 1
        elif kind == "e":
            if n is None or stage > 1:
                raise ScFormatError(f"line {lineno}: e record out of order")
            if len(nums) != 2 or not (0 <= nums[0] < nums[1] < n):
                raise ScFormatError(f"line {lineno}: bad edge record")
            pair = (nums[0], nums[1])
            if edges and pair <= edges[-1]:
                raise ScFormatError(f"line {lineno}: edges unsorted or duplicate")
            edges.append(pair)
            stage = 1
        elif kind == "t":
            if n is None:
                raise ScFormatError(f"line {lineno}: t record before v")
            if len(nums) != 3 or not (0 <= nums[0] < nums[1] < nums[2] < n):
                raise ScFormatError(f"line {lineno}: bad triangle record")
            tri = (nums[0], nums[1], nums[2])
            if triangles and tri <= triangles[-1]:
                raise ScFormatError(f"line {lineno}: triangles unsorted or duplicate")
            triangles.append(tri)
            stage = 2
        else:
            raise ScFormatError(f"line {lineno}: unknown record '{kind}'")
    if n is None:
        raise ScFormatError("missing v record")
    return SimplicialComplex2(n, edges, triangles)


def load_sc(path) -> SimplicialComplex2:
    """Read a complex from a .sc file."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads_sc(fh.read())


def dumps_sc(complex_: SimplicialComplex2) -> str:
    """Serialize a complex; output is canonical (sorted, no comments)."""
    lines = [f"v {complex_.vertex_count}"]
    lines.extend(f"e {i} {j}" for i, j in complex_.edges)
    lines.extend(f"t {i} {j} {k}" for i, j, k in complex_.triangles)
    return "\n".join(lines) + "\n"


def save_sc(complex_: SimplicialComplex2, path) -> None:
    """Write a complex to a .sc file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_sc(complex_))
