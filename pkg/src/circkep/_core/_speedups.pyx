# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend: right-hand sides and the 5(4) stepping loop.

Mirrors rhs_py / steploop expression by expression; a test cross-validates
the two backends.
"""

from libc.math cimport fabs, isfinite, pow, sqrt, NAN

import numpy as np

from . import kinds as _kinds

cdef int K_CARTESIAN = _kinds.KIND_CARTESIAN
cdef int K_REDUCED = _kinds.KIND_REDUCED
cdef int K_GP_A0 = _kinds.KIND_GAMMA_POS_A0
cdef int K_GP_APOS = _kinds.KIND_GAMMA_POS_APOS
cdef int K_GNEG = _kinds.KIND_GAMMA_NEG
cdef int K_CRIT = _kinds.KIND_CRITICAL
cdef int K_CRIT_L2 = _kinds.KIND_CRITICAL_L2

cdef int S_STOP = _kinds.STATUS_STOP_TIME
cdef int S_EVENT = _kinds.STATUS_TERMINAL_EVENT
cdef int S_MAXSTEPS = _kinds.STATUS_MAX_STEPS
cdef int S_NONFINITE = _kinds.STATUS_NON_FINITE
cdef int S_UNDERFLOW = _kinds.STATUS_STEP_UNDERFLOW

DEF MAXDIM = 8
DEF MAXEV = 8

cdef double C2 = 0.2
cdef double C3 = 0.3
cdef double C4 = 0.8
cdef double C5 = 8.0 / 9.0
cdef double A21 = 0.2
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0
cdef double B3 = 500.0 / 1113.0
cdef double B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0
cdef double B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0

cdef double SAFE = 0.9
cdef double BETA = 0.04
cdef double EXPO1 = 0.2 - 0.04 * 0.75
cdef double FAC_MAX_SHRINK = 5.0
cdef double FAC_MAX_GROW = 0.1


cdef void c_rhs(int kind, double* P, double* y, double* out) noexcept nogil:
    cdef double alpha = P[0], beta = P[1], delta = P[2], gamma = P[3], gt = P[4]
    cdef double r, p, l, lr, w2, drag, r1, v, x, big, q1, v11, mu11, s, g, q2
    cdef double yy, v1, mu1, rho1, rho2, ux, uy, vx, vy, r2, rr, ir3, s2, k
    cdef int i

    if kind == K_REDUCED:
        r = y[0]; p = y[1]; l = y[2]
        if r <= 0.0:
            for i in range(5):
                out[i] = NAN
            return
        lr = l / r
        w2 = lr * lr + p * p
        drag = delta * pow(r, -beta) * pow(w2, 0.5 * alpha)
        out[0] = p
        out[1] = (l * l / r - 1.0) / (r * r) - drag * p
        out[2] = -drag * l
        out[3] = l / (r * r)
        out[4] = 1.0
        return

    if kind == K_GNEG:
        r1 = y[0]; v = y[1]; x = y[2]
        if r1 <= 0.0:
            for i in range(5):
                out[i] = NAN
            return
        big = delta * pow(r1, -alpha - beta) * pow(1.0 + r1 * r1 * v * v, 0.5 * alpha)
        out[0] = v + 2.0 * big * x * r1
        out[1] = -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * big * x * v
        out[2] = -gt * big * x * x
        out[3] = 1.0 / (r1 * r1)
        out[4] = pow(x, 3.0 / gt) if x > 0.0 else 0.0
        return

    if kind == K_GP_APOS:
        q1 = y[0]; v11 = y[1]; mu11 = y[2]
        s = mu11 * mu11 + v11 * v11
        g = pow(s, 0.5 * alpha)
        q2 = q1 * q1
        out[0] = 0.5 * gamma / (alpha + 1.0) * q1 * q2 * v11
        out[1] = (-1.0 + q2 * (mu11 * mu11 + (2.0 - beta) / (alpha + 1.0) * v11 * v11)
                  - delta * g * v11)
        out[2] = -((alpha + beta - 1.0) / (alpha + 1.0) * q2 * v11 + delta * g) * mu11
        out[3] = mu11 * q2
        out[4] = pow(q1, 2.0 * (2.0 * alpha + beta) / gamma) if q1 > 0.0 else 0.0
        return

    if kind == K_GP_A0:
        yy = y[0]; v1 = y[1]; mu1 = y[2]
        out[0] = 0.5 * gamma * yy * yy * v1
        out[1] = (-1.0 + mu1 * mu1 + 0.5 * v1 * v1) * yy - delta * v1
        out[2] = -(0.5 * yy * v1 + delta) * mu1
        out[3] = mu1 * yy
        out[4] = pow(yy, 2.0 * beta / gamma) if yy > 0.0 else 0.0
        return

    if kind == K_CRIT:
        r1 = y[0]; v = y[1]; rho1 = y[2]
        if r1 <= 0.0:
            for i in range(5):
                out[i] = NAN
            return
        big = delta * pow(r1, -alpha - beta) * pow(1.0 + r1 * r1 * v * v, 0.5 * alpha)
        out[0] = v + 2.0 * big * r1
        out[1] = -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * big * v
        out[2] = -big * rho1
        out[3] = 1.0 / (r1 * r1)
        out[4] = rho1 * rho1 * rho1
        return

    if kind == K_CRIT_L2:
        v1 = y[0]; mu1 = y[1]; rho2 = y[2]
        s = mu1 * mu1 + v1 * v1
        g = pow(s, 0.5 * alpha)
        out[0] = 0.5 * v1 * v1 - 1.0 + mu1 * mu1 - delta * g * v1
        out[1] = -(0.5 * v1 + delta * g) * mu1
        out[2] = 0.5 * rho2 * v1
        out[3] = mu1
        out[4] = rho2 * rho2 * rho2
        return

    # cartesian
    ux = y[0]; uy = y[1]; vx = y[2]; vy = y[3]
    r2 = ux * ux + uy * uy
    if r2 <= 0.0:
        for i in range(4):
            out[i] = NAN
        return
    rr = sqrt(r2)
    ir3 = 1.0 / (r2 * rr)
    s2 = vx * vx + vy * vy
    k = delta * pow(rr, -beta) * pow(s2, 0.5 * alpha)
    out[0] = vx
    out[1] = vy
    out[2] = -ux * ir3 - k * vx
    out[3] = -uy * ir3 - k * vy


def rhs_eval(int kind, P, y):
    """Python-visible single evaluation (tests, Jacobians, cross-validation)."""
    cdef double pp[5]
    cdef double yy[MAXDIM]
    cdef double out[MAXDIM]
    cdef int n = _kinds.DIM[kind]
    cdef int i
    for i in range(5):
        pp[i] = P[i]
    for i in range(n):
        yy[i] = y[i]
    c_rhs(kind, pp, yy, out)
    return [out[i] for i in range(n)]


cdef void _stage_tail(int kind, double* P, double t, double* y, double* k1,
                      double h, int n, double* ynew,
                      double* k3, double* k4, double* k5, double* k6) noexcept nogil:
    cdef double yt[MAXDIM]
    cdef double k2[MAXDIM]
    cdef int i
    for i in range(n):
        yt[i] = y[i] + h * (A21 * k1[i])
    c_rhs(kind, P, yt, k2)
    for i in range(n):
        yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
    c_rhs(kind, P, yt, k3)
    for i in range(n):
        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
    c_rhs(kind, P, yt, k4)
    for i in range(n):
        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
    c_rhs(kind, P, yt, k5)
    for i in range(n):
        yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                            + A64 * k4[i] + A65 * k5[i])
    c_rhs(kind, P, yt, k6)
    for i in range(n):
        ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                              + B5 * k5[i] + B6 * k6[i])


cdef void _substate(int kind, double* P, double t, double* y, double* k1,
                    double s, int n, double* out) noexcept nogil:
    cdef double k3[MAXDIM]
    cdef double k4[MAXDIM]
    cdef double k5[MAXDIM]
    cdef double k6[MAXDIM]
    _stage_tail(kind, P, t, y, k1, s, n, out, k3, k4, k5, k6)


cdef double _initial_step(int kind, double* P, double t0, double* y0, double* k1,
                          double rtol, double atol, double hmax, int n) noexcept nogil:
    cdef double dnf = 0.0, dny = 0.0, sc, h, der2, der12, h1
    cdef double y1[MAXDIM]
    cdef double f1[MAXDIM]
    cdef int i
    for i in range(n):
        sc = atol + rtol * fabs(y0[i])
        dnf += (k1[i] / sc) ** 2
        dny += (y0[i] / sc) ** 2
    if dnf <= 1e-10 or dny <= 1e-10:
        h = 1e-6
    else:
        h = 0.01 * sqrt(dny / dnf)
    h = min(h, hmax)
    for i in range(n):
        y1[i] = y0[i] + h * k1[i]
    c_rhs(kind, P, y1, f1)
    der2 = 0.0
    for i in range(n):
        sc = atol + rtol * fabs(y0[i])
        der2 += ((f1[i] - k1[i]) / sc) ** 2
    der2 = sqrt(der2) / h
    der12 = max(der2, sqrt(dnf))
    if der12 <= 1e-15:
        h1 = max(1e-6, h * 1e-3)
    else:
        h1 = pow(0.01 / der12, 0.2)
    return min(100.0 * h, h1, hmax)


cdef bint _crosses(double g0, double g1, int direction) noexcept nogil:
    cdef bint up = g0 < 0.0 <= g1
    cdef bint down = g0 > 0.0 >= g1
    return (up and direction >= 0) or (down and direction <= 0)


cdef inline double _min2(double a, double b) noexcept nogil:
    return a if a < b else b


cdef inline double _max2(double a, double b) noexcept nogil:
    return a if a > b else b


def integrate_kernel(
    int kind,
    P,
    y0,
    double t0,
    double t_end,
    double rtol,
    double atol,
    double h0,
    double hmax,
    long max_steps,
    long stride,
    double fixed_step,
    events,
):
    """Compiled mirror of pykernel.integrate_kernel."""
    cdef double pp[5]
    cdef double y[MAXDIM]
    cdef double ynew[MAXDIM]
    cdef double k1[MAXDIM]
    cdef double k3[MAXDIM]
    cdef double k4[MAXDIM]
    cdef double k5[MAXDIM]
    cdef double k6[MAXDIM]
    cdef double k7[MAXDIM]
    cdef double ye[MAXDIM]
    cdef double ym[MAXDIM]
    cdef int ev_idx[MAXEV]
    cdef double ev_thr[MAXEV]
    cdef int ev_dir[MAXEV]
    cdef bint ev_term[MAXEV]
    cdef double g_prev[MAXEV]
    cdef int nonneg_idx[MAXDIM]
    cdef int n_nonneg = 0
    cdef int n_ev
    cdef int n = _kinds.DIM[kind]
    cdef int i, j
    cdef double t, span, h, h_try, err, sc, e, t_new, yi
    cdef double fac, fac11, hnew, facold, end_tol
    cdef long n_steps = 0, n_accepted = 0
    cdef int status = -1
    cdef object terminal_event = None
    cdef bint rejected_last = False, nonfinite_last = False, bad, clamped
    cdef double a, b, ga, gb, gm, m, te
    cdef int bis_it

    for i in range(5):
        pp[i] = P[i]
    for i in range(n):
        y[i] = float(y0[i])
        if not isfinite(y[i]):
            raise ValueError("initial state must be finite")
    if not t_end > t0:
        raise ValueError("stop time must exceed the start time")

    nn = _kinds.NONNEG[kind]
    n_nonneg = len(nn)
    for i in range(n_nonneg):
        nonneg_idx[i] = nn[i]

    n_ev = len(events)
    if n_ev > MAXEV:
        raise ValueError("too many events for the compiled backend")
    for j in range(n_ev):
        ev_idx[j] = events[j][0]
        ev_thr[j] = events[j][1]
        ev_dir[j] = events[j][2]
        ev_term[j] = bool(events[j][3])

    t = t0
    span = t_end - t
    if hmax <= 0.0:
        hmax = span
    hmax = min(hmax, span)

    c_rhs(kind, pp, y, k1)
    for i in range(n):
        if not isfinite(k1[i]):
            raise ValueError("field is not finite at the initial state")

    if fixed_step > 0.0:
        h = min(fixed_step, hmax)
    elif h0 > 0.0:
        h = min(h0, hmax)
    else:
        h = _initial_step(kind, pp, t, y, k1, rtol, atol, hmax, n)

    # growable sample buffers
    cdef long cap = 4096
    ts_arr = np.empty(cap, dtype=np.float64)
    ys_arr = np.empty((cap, n), dtype=np.float64)
    cdef double[::1] ts_mv = ts_arr
    cdef double[:, ::1] ys_mv = ys_arr
    cdef long m_samples = 0

    ts_mv[0] = t
    for i in range(n):
        ys_mv[0, i] = y[i]
    m_samples = 1

    for j in range(n_ev):
        g_prev[j] = y[ev_idx[j]] - ev_thr[j]

    ev_records = []
    facold = 1e-4
    end_tol = 1e-14 * max(1.0, fabs(t_end))

    while True:
        if t_end - t <= end_tol:
            status = S_STOP
            break
        if n_steps >= max_steps:
            status = S_MAXSTEPS
            break
        h_try = _min2(_min2(h, hmax), t_end - t)
        if h_try < _max2(1e-15 * fabs(t), 5e-292):
            status = S_NONFINITE if nonfinite_last else S_UNDERFLOW
            break

        _stage_tail(kind, pp, t, y, k1, h_try, n, ynew, k3, k4, k5, k6)
        c_rhs(kind, pp, ynew, k7)
        n_steps += 1

        bad = False
        for i in range(n):
            if not isfinite(ynew[i]) or not isfinite(k7[i]):
                bad = True
                break

        if fixed_step > 0.0:
            if bad:
                status = S_NONFINITE
                break
            err = 0.0
        else:
            err = 0.0
            if not bad:
                for i in range(n):
                    sc = atol + rtol * _max2(fabs(y[i]), fabs(ynew[i]))
                    e = h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i]
                                 + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]) / sc
                    err += e * e
                err = sqrt(err / n)
            if bad or not isfinite(err):
                nonfinite_last = True
                rejected_last = True
                h = 0.5 * h_try
                continue
            if err > 1.0:
                fac11 = pow(err, EXPO1)
                h = h_try / _min2(FAC_MAX_SHRINK, fac11 / SAFE)
                rejected_last = True
                nonfinite_last = False
                continue

        nonfinite_last = False
        t_new = t + h_try
        clamped = False
        for i in range(n_nonneg):
            yi = ynew[nonneg_idx[i]]
            if yi < atol:
                if yi <= -10.0 * atol:
                    status = S_NONFINITE
                    break
                if yi != 0.0:
                    ynew[nonneg_idx[i]] = 0.0
                    clamped = True
        if status >= 0:
            break

        crossings = None
        for j in range(n_ev):
            gb = ynew[ev_idx[j]] - ev_thr[j]
            if _crosses(g_prev[j], gb, ev_dir[j]):
                # bisection with fifth-order substeps
                a = 0.0
                ga = y[ev_idx[j]] - ev_thr[j]
                b = h_try
                for i in range(n):
                    ye[i] = ynew[i]
                gm = gb
                bis_it = 0
                while (b - a) > 1e-12 * fabs(t + b) + 1e-14 and bis_it < 200:
                    m = 0.5 * (a + b)
                    _substate(kind, pp, t, y, k1, m, n, ym)
                    gm = ym[ev_idx[j]] - ev_thr[j]
                    if _crosses(ga, gm, ev_dir[j]):
                        b = m
                        for i in range(n):
                            ye[i] = ym[i]
                    else:
                        a = m
                        ga = gm
                    bis_it += 1
                te = t + b
                if crossings is None:
                    crossings = []
                crossings.append((te, j, [ye[i] for i in range(n)], ev_term[j]))
            g_prev[j] = gb
        if crossings is not None:
            crossings.sort(key=lambda c: (c[0], c[1]))
            for rec in crossings:
                ev_records.append((rec[1], rec[0], list(rec[2])))
                if rec[3]:
                    if m_samples >= cap:
                        cap = cap * 2
                        ts_arr, ys_arr = _grow(ts_arr, ys_arr, cap)
                        ts_mv = ts_arr
                        ys_mv = ys_arr
                    ts_mv[m_samples] = rec[0]
                    for i in range(n):
                        ys_mv[m_samples, i] = rec[2][i]
                    m_samples += 1
                    terminal_event = rec[1]
                    status = S_EVENT
                    break
        if status >= 0:
            break

        if clamped:
            c_rhs(kind, pp, ynew, k1)
        else:
            for i in range(n):
                k1[i] = k7[i]
        t = t_new
        for i in range(n):
            y[i] = ynew[i]
        n_accepted += 1
        if n_accepted % stride == 0:
            if m_samples >= cap:
                cap = cap * 2
                ts_arr, ys_arr = _grow(ts_arr, ys_arr, cap)
                ts_mv = ts_arr
                ys_mv = ys_arr
            ts_mv[m_samples] = t
            for i in range(n):
                ys_mv[m_samples, i] = y[i]
            m_samples += 1

        if fixed_step > 0.0:
            h = fixed_step
        else:
            if err <= 0.0:
                fac = FAC_MAX_GROW
            else:
                fac11 = pow(err, EXPO1)
                fac = fac11 / pow(facold, BETA)
                fac = _max2(FAC_MAX_GROW, _min2(FAC_MAX_SHRINK, fac / SAFE))
            hnew = h_try / fac
            if rejected_last:
                hnew = _min2(hnew, h_try)
            h = _min2(hnew, hmax)
            facold = _max2(err, 1e-4)
            rejected_last = False

    if status != S_EVENT and ts_mv[m_samples - 1] != t:
        if m_samples >= cap:
            cap = cap * 2
            ts_arr, ys_arr = _grow(ts_arr, ys_arr, cap)
            ts_mv = ts_arr
            ys_mv = ys_arr
        ts_mv[m_samples] = t
        for i in range(n):
            ys_mv[m_samples, i] = y[i]
        m_samples += 1

    return (
        ts_arr[:m_samples].copy(),
        ys_arr[:m_samples].copy(),
        status,
        n_steps,
        n_accepted,
        ev_records,
        terminal_event,
    )


def _grow(ts_arr, ys_arr, long cap):
    ts_new = np.empty(cap, dtype=np.float64)
    ys_new = np.empty((cap, ys_arr.shape[1]), dtype=np.float64)
    n = ts_arr.shape[0]
    ts_new[:n] = ts_arr
    ys_new[:n, :] = ys_arr
    return ts_new, ys_new
