"""Pure-numpy kernels; the semantic reference for the compiled extension.

Both backends must keep identical control flow (iteration counts, stopping
decisions, history recording) so that results agree to rounding error.
"""

import numpy as np

CODE_NONNEG, CODE_ZERO, CODE_FREE = 0, 1, 2
HIST_CAP = 512


def _masks(codes):
    codes = np.asarray(codes, dtype=np.int8)
    return codes == CODE_NONNEG, codes == CODE_ZERO


def _project(nn, zz, v):
    out = v.copy()
    out[nn] = np.maximum(out[nn], 0.0)
    out[zz] = 0.0
    return out


def _dist(nn, zz, v):
    neg = np.minimum(v[nn], 0.0)
    return float(np.sqrt(np.sum(neg * neg) + np.sum(v[zz] * v[zz])))


def extragradient_loop(Q, c, d, A, b, k_codes, kdual_codes, p_codes, pdual_codes,
                       x0, z0, tau, max_iters, residual_tol):
    """Projected primal-dual extragradient iteration on the Lagrange function.

    Residuals are evaluated at the top of every pass, so the reported values
    always belong to the returned pair. Returns
    ``(x, z, iters, converged, residuals[5], hist_iters, hist_values)`` with
    residuals ordered (stationarity, complementarity, primal feasibility,
    dual feasibility, complementary slackness).
    """
    x = np.array(x0, dtype=float)
    z = np.array(z0, dtype=float)
    A = np.ascontiguousarray(A, dtype=float)
    At = np.ascontiguousarray(A.T)
    Q = np.ascontiguousarray(Q, dtype=float)
    k_nn, k_zz = _masks(k_codes)
    kd_nn, kd_zz = _masks(kdual_codes)
    p_nn, p_zz = _masks(p_codes)
    pd_nn, pd_zz = _masks(pdual_codes)

    qx = Q @ x
    atz = At @ z
    ax_b = A @ x - b

    res = np.zeros(5)
    hist_it = []
    hist_val = []
    stride = 1
    converged = False
    it = 0
    while True:
        g = qx + c + atz
        res[0] = _dist(kd_nn, kd_zz, g)
        res[1] = abs(float(g @ x))
        res[2] = _dist(p_nn, p_zz, -ax_b) + _dist(k_nn, k_zz, x)
        res[3] = _dist(pd_nn, pd_zz, z)
        res[4] = abs(float(z @ ax_b))
        stop = bool(np.max(res) <= residual_tol) or it >= max_iters

        if it % stride == 0 or stop:
            if not hist_it or hist_it[-1] != it:
                lag = 0.5 * float(x @ qx) + float(c @ x) + d + float(z @ ax_b)
                hist_it.append(it)
                hist_val.append(lag)
                if len(hist_it) >= HIST_CAP and not stop:
                    hist_it = hist_it[::2]
                    hist_val = hist_val[::2]
                    stride *= 2

        if np.max(res) <= residual_tol:
            converged = True
            break
        if it >= max_iters:
            break

        xb = _project(k_nn, k_zz, x - tau * g)
        zb = _project(pd_nn, pd_zz, z + tau * ax_b)
        x = _project(k_nn, k_zz, x - tau * (Q @ xb + c + At @ zb))
        z = _project(pd_nn, pd_zz, z + tau * (A @ xb - b))

        qx = Q @ x
        atz = At @ z
        ax_b = A @ x - b
        it += 1

    return (x, z, it, converged, res.copy(),
            np.array(hist_it, dtype=np.int64), np.array(hist_val, dtype=float))


def phase1_loop(A, b_bar, k_codes, p_codes, x0, tau, max_iters, feas_tol, step_tol):
    """Projected gradient descent on 0.5 * dist(P, b_bar - A x)^2 over x in K.

    Stops when the defect norm reaches ``feas_tol`` (feasible point found),
    when successive iterates move less than ``step_tol`` relatively
    (stationary: minimum distance reached within the step resolution), or at
    ``max_iters``. Returns ``(x, residual, iters, converged)``.
    """
    x = np.array(x0, dtype=float)
    A = np.ascontiguousarray(A, dtype=float)
    At = np.ascontiguousarray(A.T)
    k_nn, k_zz = _masks(k_codes)
    p_nn, p_zz = _masks(p_codes)

    converged = False
    it = 0
    while True:
        r = b_bar - A @ x
        s = r - _project(p_nn, p_zz, r)
        resid = float(np.sqrt(s @ s))
        if resid <= feas_tol:
            converged = True
            break
        if it >= max_iters:
            break
        x_new = _project(k_nn, k_zz, x + tau * (At @ s))
        step = float(np.max(np.abs(x_new - x)))
        x = x_new
        it += 1
        if step <= step_tol * (1.0 + float(np.max(np.abs(x)))):
            r = b_bar - A @ x
            s = r - _project(p_nn, p_zz, r)
            resid = float(np.sqrt(s @ s))
            converged = True
            break

    return x, resid, it, converged
