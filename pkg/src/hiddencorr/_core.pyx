# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Jacobi Hermitian eigensolver and the qubit-measurement
mutual-information objective used by the symmetric-discord search."""
import numpy as np

from libc.math cimport sqrt, fabs, log2, sin, cos

NAME = "compiled"
#: grid values this close to the maximum are treated as ties
cdef double TIE = 1e-12


cdef double _offdiag_norm(double[:, ::1] ar, double[:, ::1] ai, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(i + 1, n):
            s += ar[i, j] * ar[i, j] + ai[i, j] * ai[i, j]
    return sqrt(2.0 * s)


cdef inline void _rotate(double[:, ::1] mr, double[:, ::1] mi, Py_ssize_t n,
                         Py_ssize_t p, Py_ssize_t q, double c, double s, double sr, double si,
                         double wr, double wi, bint columns) noexcept nogil:
    # columns: m[:, p] <- c m[:, p] - u m[:, q],  m[:, q] <- s m[:, p] + w m[:, q]
    # rows use the same update with p/q as row indices
    # with complex u = (sr, si), w = (wr, wi) and real c, s
    cdef Py_ssize_t k
    cdef double xr, xi, yr, yi
    for k in range(n):
        if columns:
            xr = mr[k, p]; xi = mi[k, p]; yr = mr[k, q]; yi = mi[k, q]
        else:
            xr = mr[p, k]; xi = mi[p, k]; yr = mr[q, k]; yi = mi[q, k]
        if columns:
            mr[k, p] = c * xr - (sr * yr - si * yi)
            mi[k, p] = c * xi - (sr * yi + si * yr)
            mr[k, q] = s * xr + (wr * yr - wi * yi)
            mi[k, q] = s * xi + (wr * yi + wi * yr)
        else:
            mr[p, k] = c * xr - (sr * yr - si * yi)
            mi[p, k] = c * xi - (sr * yi + si * yr)
            mr[q, k] = s * xr + (wr * yr - wi * yi)
            mi[q, k] = s * xi + (wr * yi + wi * yr)


cdef void _jacobi(double[:, ::1] ar, double[:, ::1] ai, double[:, ::1] vr, double[:, ::1] vi,
                  Py_ssize_t n, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t p, q
    cdef int sweep
    cdef double r, er, ei, theta, t, c, s
    for sweep in range(max_sweeps):
        if _offdiag_norm(ar, ai, n) <= tol:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = sqrt(ar[p, q] * ar[p, q] + ai[p, q] * ai[p, q])
                if r < 1e-300:
                    continue
                # e = a_pq / |a_pq|
                er = ar[p, q] / r
                ei = ai[p, q] / r
                theta = (ar[q, q] - ar[p, p]) / (2.0 * r)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                # G = [[c, s], [-s conj(e), c conj(e)]] on the (p, q) plane
                _rotate(ar, ai, n, p, q, c, s, s * er, -s * ei, c * er, -c * ei, True)
                _rotate(ar, ai, n, p, q, c, s, s * er, s * ei, c * er, c * ei, False)
                _rotate(vr, vi, n, p, q, c, s, s * er, -s * ei, c * er, -c * ei, True)
                ar[p, q] = 0.0; ai[p, q] = 0.0
                ar[q, p] = 0.0; ai[q, p] = 0.0
                ai[p, p] = 0.0; ai[q, q] = 0.0


def eigh(m, double tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Stops once the Frobenius norm of the off-diagonal part drops below
    ``tol * max(1, ||m||_F)``. Eigenvalue order is unspecified.
    """
    src = np.asarray(m, dtype=np.complex128)
    if src.ndim != 2 or src.shape[0] != src.shape[1]:
        raise ValueError("square matrix required")
    cdef const double complex[:, :] h = src
    cdef Py_ssize_t n = src.shape[0]
    scratch = np.empty((4, n, n))
    cdef double[:, ::1] ar = scratch[0]
    cdef double[:, ::1] ai = scratch[1]
    cdef double[:, ::1] vr = scratch[2]
    cdef double[:, ::1] vi = scratch[3]
    w_arr = np.empty(n)
    v_arr = np.empty((n, n), dtype=np.complex128)
    cdef double[::1] w = w_arr
    cdef double[:, ::1] v_out = v_arr.view(np.float64)  # interleaved re, im
    cdef double norm2 = 0.0
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            for j in range(n):
                # Hermitian part, so round-off asymmetry in the input is ignored
                ar[i, j] = 0.5 * (h[i, j].real + h[j, i].real)
                ai[i, j] = 0.5 * (h[i, j].imag - h[j, i].imag)
                norm2 += ar[i, j] * ar[i, j] + ai[i, j] * ai[i, j]
                vr[i, j] = 1.0 if i == j else 0.0
                vi[i, j] = 0.0
        _jacobi(ar, ai, vr, vi, n, tol * max(1.0, sqrt(norm2)), max_sweeps)
        for i in range(n):
            w[i] = ar[i, i]
            for j in range(n):
                v_out[i, 2 * j] = vr[i, j]
                v_out[i, 2 * j + 1] = vi[i, j]
    return w_arr, v_arr


def entropy_bits(values, double floor):
    cdef double[::1] w = np.ascontiguousarray(values, dtype=np.float64)
    cdef double h = 0.0
    cdef Py_ssize_t i
    for i in range(w.shape[0]):
        if w[i] > floor:
            h -= w[i] * log2(w[i])
    return h


cdef inline double _xlog2x(double p) noexcept nogil:
    if p > 1e-15:
        return p * log2(p)
    return 0.0


cdef inline double _table_mi(double x, double y, double z) noexcept nogil:
    cdef double joint = (_xlog2x((1 + x + y + z) / 4) + _xlog2x((1 + x - y - z) / 4)
                         + _xlog2x((1 - x + y - z) / 4) + _xlog2x((1 - x - y + z) / 4))
    cdef double marg = (_xlog2x((1 + x) / 2) + _xlog2x((1 - x) / 2)
                        + _xlog2x((1 + y) / 2) + _xlog2x((1 - y) / 2))
    return joint - marg


def measured_mi(ra, rb, corr, double ta, double pa, double tb, double pb):
    """Shannon mutual information (bits) of two Bloch-direction qubit measurements."""
    cdef double[::1] a = np.ascontiguousarray(ra, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(rb, dtype=np.float64)
    cdef double[:, ::1] t = np.ascontiguousarray(corr, dtype=np.float64)
    cdef double na[3]
    cdef double nb[3]
    cdef double x, y, z = 0.0
    cdef int i, j
    na[0] = sin(ta) * cos(pa); na[1] = sin(ta) * sin(pa); na[2] = cos(ta)
    nb[0] = sin(tb) * cos(pb); nb[1] = sin(tb) * sin(pb); nb[2] = cos(tb)
    x = na[0] * a[0] + na[1] * a[1] + na[2] * a[2]
    y = nb[0] * b[0] + nb[1] * b[1] + nb[2] * b[2]
    for i in range(3):
        for j in range(3):
            z += na[i] * t[i, j] * nb[j]
    return _table_mi(x, y, z)


def grid_search(ra, rb, corr, thetas, phis):
    """Exhaustive maximisation of ``measured_mi`` over a product angle grid.

    Returns ``(best_mi, k, l)``; values within ``TIE`` of the maximum count
    as ties, which resolve to the first index in lexicographic order.
    """
    cdef double[::1] a = np.ascontiguousarray(ra, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(rb, dtype=np.float64)
    cdef double[:, ::1] t = np.ascontiguousarray(corr, dtype=np.float64)
    cdef double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef Py_ssize_t nt = th.shape[0], nph = ph.shape[0]
    cdef Py_ssize_t K = nt * nph
    dirs_arr = np.empty((K, 3))
    cdef double[:, ::1] dirs = dirs_arr
    cdef Py_ssize_t i, j, k, l
    for i in range(nt):
        for j in range(nph):
            k = i * nph + j
            dirs[k, 0] = sin(th[i]) * cos(ph[j])
            dirs[k, 1] = sin(th[i]) * sin(ph[j])
            dirs[k, 2] = cos(th[i])
    xs_arr = np.empty(K)
    ys_arr = np.empty(K)
    tb_arr = np.empty((K, 3))  # corr @ dir_b for every b direction
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef double[:, ::1] tb = tb_arr
    for k in range(K):
        xs[k] = dirs[k, 0] * a[0] + dirs[k, 1] * a[1] + dirs[k, 2] * a[2]
        ys[k] = dirs[k, 0] * b[0] + dirs[k, 1] * b[1] + dirs[k, 2] * b[2]
        for i in range(3):
            tb[k, i] = t[i, 0] * dirs[k, 0] + t[i, 1] * dirs[k, 1] + t[i, 2] * dirs[k, 2]
    vals_arr = np.empty((K, K))
    cdef double[:, ::1] vals = vals_arr
    # marginal terms depend on one party only
    hx_arr = np.empty(K)
    hy_arr = np.empty(K)
    cdef double[::1] hx = hx_arr
    cdef double[::1] hy = hy_arr
    for k in range(K):
        hx[k] = _xlog2x((1 + xs[k]) / 2) + _xlog2x((1 - xs[k]) / 2)
        hy[k] = _xlog2x((1 + ys[k]) / 2) + _xlog2x((1 - ys[k]) / 2)
    cdef double best = -1.0, z, x, y
    cdef Py_ssize_t bk = 0, bl = 0
    cdef bint found = False
    with nogil:
        for k in range(K):
            x = xs[k]
            for l in range(K):
                y = ys[l]
                z = dirs[k, 0] * tb[l, 0] + dirs[k, 1] * tb[l, 1] + dirs[k, 2] * tb[l, 2]
                vals[k, l] = (_xlog2x((1 + x + y + z) / 4) + _xlog2x((1 + x - y - z) / 4)
                              + _xlog2x((1 - x + y - z) / 4) + _xlog2x((1 - x - y + z) / 4)
                              - hx[k] - hy[l])
                if vals[k, l] > best:
                    best = vals[k, l]
        # first index within TIE of the maximum, so rounding cannot reorder symmetric ties
        for k in range(K):
            for l in range(K):
                if vals[k, l] >= best - TIE:
                    bk = k
                    bl = l
                    found = True
                    break
            if found:
                break
    return vals[bk, bl], bk, bl
