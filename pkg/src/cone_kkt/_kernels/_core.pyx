# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; contract and control flow mirror _reference exactly.

Matrix-vector products are naive C loops: deterministic, allocation-free,
and fast enough at desk scale that iteration count, not flops, dominates.
"""

import numpy as np

from libc.math cimport fabs, sqrt

DEF HIST_CAP = 512


cdef inline double _proj1(signed char code, double v) nogil:
    if code == 0:      # nonneg
        return v if v > 0.0 else 0.0
    elif code == 1:    # zero
        return 0.0
    return v           # free


cdef inline double _dist2_1(signed char code, double v) nogil:
    if code == 0:
        return v * v if v < 0.0 else 0.0
    elif code == 1:
        return v * v
    return 0.0


cdef void _matvec(double[:, ::1] M, double[::1] v, double[::1] out) nogil:
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(M.shape[0]):
        acc = 0.0
        for j in range(M.shape[1]):
            acc += M[i, j] * v[j]
        out[i] = acc


cdef inline double _dot(double[::1] a, double[::1] b) nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(a.shape[0]):
        acc += a[i] * b[i]
    return acc


def extragradient_loop(Q, c, double d, A, b,
                       k_codes, kdual_codes, p_codes, pdual_codes,
                       x0, z0, double tau, long max_iters, double residual_tol):
    cdef double[:, ::1] Qv = np.ascontiguousarray(Q, dtype=np.float64)
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] Atv = np.ascontiguousarray(np.asarray(A, dtype=np.float64).T)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef signed char[::1] kc = np.ascontiguousarray(k_codes, dtype=np.int8)
    cdef signed char[::1] kdc = np.ascontiguousarray(kdual_codes, dtype=np.int8)
    cdef signed char[::1] pc = np.ascontiguousarray(p_codes, dtype=np.int8)
    cdef signed char[::1] pdc = np.ascontiguousarray(pdual_codes, dtype=np.int8)

    x_arr = np.array(x0, dtype=np.float64)
    z_arr = np.array(z0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] z = z_arr
    cdef Py_ssize_t n = x.shape[0], m = z.shape[0]

    qx_arr = np.empty(n); atz_arr = np.empty(n); g_arr = np.empty(n)
    xb_arr = np.empty(n); tmp_n_arr = np.empty(n)
    ax_b_arr = np.empty(m); zb_arr = np.empty(m); tmp_m_arr = np.empty(m)
    cdef double[::1] qx = qx_arr, atz = atz_arr, g = g_arr
    cdef double[::1] xb = xb_arr, tmp_n = tmp_n_arr
    cdef double[::1] ax_b = ax_b_arr, zb = zb_arr, tmp_m = tmp_m_arr

    res_arr = np.zeros(5)
    cdef double[::1] res = res_arr

    hist_it_arr = np.zeros(HIST_CAP + 1, dtype=np.int64)
    hist_val_arr = np.zeros(HIST_CAP + 1, dtype=np.float64)
    cdef long[::1] hist_it = hist_it_arr
    cdef double[::1] hist_val = hist_val_arr
    cdef Py_ssize_t hist_len = 0, stride = 1, h

    cdef Py_ssize_t i, j
    cdef long it = 0
    cdef bint converged = False, stop
    cdef double acc, rmax, lag

    _matvec(Qv, x, qx)
    _matvec(Atv, z, atz)
    _matvec(Av, x, ax_b)
    for j in range(m):
        ax_b[j] -= bv[j]

    while True:
        for i in range(n):
            g[i] = qx[i] + cv[i] + atz[i]

        acc = 0.0
        for i in range(n):
            acc += _dist2_1(kdc[i], g[i])
        res[0] = sqrt(acc)
        res[1] = fabs(_dot(g, x))
        acc = 0.0
        for j in range(m):
            acc += _dist2_1(pc[j], -ax_b[j])
        rmax = 0.0
        for i in range(n):
            rmax += _dist2_1(kc[i], x[i])
        res[2] = sqrt(acc) + sqrt(rmax)
        acc = 0.0
        for j in range(m):
            acc += _dist2_1(pdc[j], z[j])
        res[3] = sqrt(acc)
        res[4] = fabs(_dot(z, ax_b))

        rmax = res[0]
        for i in range(1, 5):
            if res[i] > rmax:
                rmax = res[i]
        stop = rmax <= residual_tol or it >= max_iters

        if it % stride == 0 or stop:
            if hist_len == 0 or hist_it[hist_len - 1] != it:
                lag = 0.5 * _dot(x, qx) + _dot(cv, x) + d + _dot(z, ax_b)
                hist_it[hist_len] = it
                hist_val[hist_len] = lag
                hist_len += 1
                if hist_len >= HIST_CAP and not stop:
                    for h in range((hist_len + 1) // 2):
                        hist_it[h] = hist_it[2 * h]
                        hist_val[h] = hist_val[2 * h]
                    hist_len = (hist_len + 1) // 2
                    stride *= 2

        if rmax <= residual_tol:
            converged = True
            break
        if it >= max_iters:
            break

        for i in range(n):
            xb[i] = _proj1(kc[i], x[i] - tau * g[i])
        for j in range(m):
            zb[j] = _proj1(pdc[j], z[j] + tau * ax_b[j])

        _matvec(Qv, xb, tmp_n)
        _matvec(Atv, zb, g)        # g reused as scratch for A.T @ zb
        for i in range(n):
            tmp_n[i] = x[i] - tau * (tmp_n[i] + cv[i] + g[i])
        _matvec(Av, xb, tmp_m)
        for j in range(m):
            z[j] = _proj1(pdc[j], z[j] + tau * (tmp_m[j] - bv[j]))
        for i in range(n):
            x[i] = _proj1(kc[i], tmp_n[i])

        _matvec(Qv, x, qx)
        _matvec(Atv, z, atz)
        _matvec(Av, x, ax_b)
        for j in range(m):
            ax_b[j] -= bv[j]
        it += 1

    return (x_arr, z_arr, int(it), bool(converged), res_arr.copy(),
            hist_it_arr[:hist_len].copy(), hist_val_arr[:hist_len].copy())


def phase1_loop(A, b_bar, k_codes, p_codes, x0,
                double tau, long max_iters, double feas_tol, double step_tol):
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] Atv = np.ascontiguousarray(np.asarray(A, dtype=np.float64).T)
    cdef double[::1] bb = np.ascontiguousarray(b_bar, dtype=np.float64)
    cdef signed char[::1] kc = np.ascontiguousarray(k_codes, dtype=np.int8)
    cdef signed char[::1] pc = np.ascontiguousarray(p_codes, dtype=np.int8)

    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef Py_ssize_t n = x.shape[0], m = bb.shape[0]

    s_arr = np.empty(m); tmp_m_arr = np.empty(m); tmp_n_arr = np.empty(n)
    cdef double[::1] s = s_arr, tmp_m = tmp_m_arr, tmp_n = tmp_n_arr

    cdef Py_ssize_t i, j
    cdef long it = 0
    cdef bint converged = False
    cdef double resid = 0.0, acc, step, xmax, v

    while True:
        _matvec(Av, x, tmp_m)
        acc = 0.0
        for j in range(m):
            v = bb[j] - tmp_m[j]
            s[j] = v - _proj1(pc[j], v)
            acc += s[j] * s[j]
        resid = sqrt(acc)
        if resid <= feas_tol:
            converged = True
            break
        if it >= max_iters:
            break
        _matvec(Atv, s, tmp_n)
        step = 0.0
        xmax = 0.0
        for i in range(n):
            v = _proj1(kc[i], x[i] + tau * tmp_n[i])
            acc = fabs(v - x[i])
            if acc > step:
                step = acc
            x[i] = v
            acc = fabs(v)
            if acc > xmax:
                xmax = acc
        it += 1
        if step <= step_tol * (1.0 + xmax):
            _matvec(Av, x, tmp_m)
            acc = 0.0
            for j in range(m):
                v = bb[j] - tmp_m[j]
                s[j] = v - _proj1(pc[j], v)
                acc += s[j] * s[j]
            resid = sqrt(acc)
            converged = True
            break

    return x_arr, float(resid), int(it), bool(converged)
