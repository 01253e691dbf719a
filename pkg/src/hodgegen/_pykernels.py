"""Pure-Python relaxation kernels.

These are the reference implementations of the hot loops.  The compiled
module _cykernels provides bit-identical twins; both accumulate each row
dot product left to right in ascending column order and never fuse the
multiply and add, so results match to the last bit.  Do not vectorize
these loops: pairwise summation would change the rounding.
"""

from __future__ import annotations


def matvec(indptr, indices, data, x, out):
    """out = A @ x for CSR A; plain scalar loops."""
    n = len(out)
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s = s + data[p] * x[indices[p]]
        out[i] = s


def sweep(indptr, indices, data, y_in, y_out, delta):
    """One relaxation pass y_out = y_in - delta * (A @ y_in).

    Returns the sup-norm of the applied update.
    """
    n = len(y_in)
    worst = 0.0
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s = s + data[p] * y_in[indices[p]]
        u = delta * s
        y_out[i] = y_in[i] - u
        au = abs(u)
        if au > worst:
            worst = au
    return worst


def run(indptr, indices, data, y, work, delta, threshold, max_iters):
    """Repeat sweeps until the update sup-norm drops below threshold.

    y holds the final iterate on return.  Returns (iterations, last
    update norm, converged).  Internally copies to Python lists; float
    arithmetic is identical either way.
    """
    n = len(y)
    ip = indptr.tolist() if hasattr(indptr, "tolist") else list(indptr)
    ix = indices.tolist() if hasattr(indices, "tolist") else list(indices)
    dv = data.tolist() if hasattr(data, "tolist") else list(data)
    src = [float(v) for v in y]
    dst = [0.0] * n

    it = 0
    worst = 0.0
    done = False
    while it < max_iters:
        worst = 0.0
        for i in range(n):
            s = 0.0
            for p in range(ip[i], ip[i + 1]):
                s = s + dv[p] * src[ix[p]]
            u = delta * s
            dst[i] = src[i] - u
            au = abs(u)
            if au > worst:
                worst = au
        it += 1
        src, dst = dst, src
        if worst < threshold:
            done = True
            break
    y[:] = src
    return it, worst, done
