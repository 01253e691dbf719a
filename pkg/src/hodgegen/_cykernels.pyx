# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in _pykernels.

Operation order matches the pure-Python versions exactly: row dots
accumulate left to right in ascending column order and the build disables
floating-point contraction, so both backends produce identical bits.
"""

from libc.math cimport fabs


cdef double _sweep(const int[::1] indptr, const int[::1] indices,
                   const double[::1] data, const double[::1] y_in,
                   double[::1] y_out, double delta) noexcept nogil:
    cdef Py_ssize_t n = y_in.shape[0]
    cdef Py_ssize_t i
    cdef int p
    cdef double s, u, au, worst
    worst = 0.0
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s = s + data[p] * y_in[indices[p]]
        u = delta * s
        y_out[i] = y_in[i] - u
        au = fabs(u)
        if au > worst:
            worst = au
    return worst


def matvec(const int[::1] indptr, const int[::1] indices,
           const double[::1] data, const double[::1] x, double[::1] out):
    """out = A @ x for CSR A."""
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i
    cdef int p
    cdef double s
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s = s + data[p] * x[indices[p]]
        out[i] = s


def sweep(const int[::1] indptr, const int[::1] indices,
          const double[::1] data, const double[::1] y_in,
          double[::1] y_out, double delta):
    """One relaxation pass; returns the sup-norm of the applied update."""
    return _sweep(indptr, indices, data, y_in, y_out, delta)


def run(const int[::1] indptr, const int[::1] indices,
        const double[::1] data, double[::1] y, double[::1] work,
        double delta, double threshold, long max_iters):
    """Sweep until the update sup-norm drops below threshold.

    y holds the final iterate on return; returns (iterations, last
    update norm, converged).
    """
    cdef double[::1] src = y
    cdef double[::1] dst = work
    cdef double[::1] tmp
    cdef long it = 0
    cdef double worst = 0.0
    cdef bint done = False
    cdef bint in_y = True
    while it < max_iters:
        worst = _sweep(indptr, indices, data, src, dst, delta)
        it += 1
        tmp = src
        src = dst
        dst = tmp
        in_y = not in_y
        if worst < threshold:
            done = True
            break
    if not in_y:
        y[:] = src
    return it, worst, done
