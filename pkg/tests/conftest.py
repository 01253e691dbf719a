"""Shared fixture complexes for the test suite.

The four fixed complexes cover the homology cases the pipeline branches
on: one hole with no triangles, zero holes with one triangle, two holes
sharing a vertex, and one hole inside a triangulated band.
"""

import numpy as np

from hodgegen import GeomConfig, SimplicialComplex2, generate


def hollow_triangle():
    return SimplicialComplex2(3, [(0, 1), (0, 2), (1, 2)])


def filled_triangle():
    return SimplicialComplex2(3, [(0, 1), (0, 2), (1, 2)], [(0, 1, 2)])


def figure_eight():
    """Two triangles sharing vertex 0, no 2-cells; b1 = 2."""
    return SimplicialComplex2(
        5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]
    )


def annulus():
    """Triangulated band between two squares; b1 = 1, Euler number 0."""
    edges = [(0, 1), (0, 3), (0, 4), (0, 5), (1, 2), (1, 5), (1, 6), (2, 3),
             (2, 6), (2, 7), (3, 4), (3, 7), (4, 5), (4, 7), (5, 6), (6, 7)]
    triangles = [(0, 1, 5), (0, 3, 4), (0, 4, 5), (1, 2, 6), (1, 5, 6),
                 (2, 3, 7), (2, 6, 7), (3, 4, 7)]
    return SimplicialComplex2(8, edges, triangles)


def lollipop():
    """Hollow triangle with a two-edge tail; exercises root handoff."""
    return SimplicialComplex2(
        5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]
    )


def fixed_complexes():
    return [hollow_triangle(), filled_triangle(), figure_eight(), annulus()]


def rgg(n, seed, avg_degree=6.0):
    return generate(GeomConfig(n=n, avg_degree=avg_degree, seed=seed))


def dense_from_csr(indptr, indices, data, shape):
    out = np.zeros(shape, dtype=np.float64)
    for i in range(shape[0]):
        for p in range(indptr[i], indptr[i + 1]):
            out[i, indices[p]] = data[p]
    return out
