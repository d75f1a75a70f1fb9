"""Adaptive embedded 5(4) stepping loop with event bisection.

Dormand-Prince tableau, Lund-stabilized PI step control, FSAL.  Works on any
Python callable field; the compiled backend reimplements the identical
algorithm for the built-in kernels.  Events are located by bisection on the
event function, with intermediate states obtained from a single fifth-order
substep off the step start (never by sample-grid snapping).
"""

import math
from typing import Callable, NamedTuple, Sequence

from .kinds import (
    STATUS_MAX_STEPS,
    STATUS_NON_FINITE,
    STATUS_STEP_UNDERFLOW,
    STATUS_STOP_TIME,
    STATUS_TERMINAL_EVENT,
)

# Dormand-Prince 5(4) coefficients (the classic ode45 pair).
C2 = 0.2
C3 = 0.3
C4 = 0.8
C5 = 8.0 / 9.0
A21 = 0.2
A31 = 3.0 / 40.0
A32 = 9.0 / 40.0
A41 = 44.0 / 45.0
A42 = -56.0 / 15.0
A43 = 32.0 / 9.0
A51 = 19372.0 / 6561.0
A52 = -25360.0 / 2187.0
A53 = 64448.0 / 6561.0
A54 = -212.0 / 729.0
A61 = 9017.0 / 3168.0
A62 = -355.0 / 33.0
A63 = 46732.0 / 5247.0
A64 = 49.0 / 176.0
A65 = -5103.0 / 18656.0
B1 = 35.0 / 384.0
B3 = 500.0 / 1113.0
B4 = 125.0 / 192.0
B5 = -2187.0 / 6784.0
B6 = 11.0 / 84.0
E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0

# Step controller (Hairer's dopri5 settings).
SAFE = 0.9
BETA = 0.04
EXPO1 = 0.2 - BETA * 0.75
FAC_MAX_SHRINK = 5.0   # one step may shrink h by at most 1/5
FAC_MAX_GROW = 0.1     # ... and grow it by at most 10x

_BISECT_MAX_ITER = 200


class RawResult(NamedTuple):
    times: list
    states: list
    status: int
    n_steps: int
    n_accepted: int
    events: list            # (event_index, time, state) tuples
    terminal_event: object  # event index or None


def _stage_tail(f, t, y, k1, h):
    """Stages 2..6 and the fifth-order result for a step of size h."""
    n = len(y)
    yt = [y[i] + h * (A21 * k1[i]) for i in range(n)]
    k2 = f(t + C2 * h, yt)
    yt = [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(n)]
    k3 = f(t + C3 * h, yt)
    yt = [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(n)]
    k4 = f(t + C4 * h, yt)
    yt = [
        y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        for i in range(n)
    ]
    k5 = f(t + C5 * h, yt)
    yt = [
        y[i]
        + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
        for i in range(n)
    ]
    k6 = f(t + h, yt)
    ynew = [
        y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
        for i in range(n)
    ]
    return k3, k4, k5, k6, ynew


def _substate(f, t, y, k1, s):
    """Fifth-order state at t+s inside an accepted step starting at (t, y)."""
    return _stage_tail(f, t, y, k1, s)[4]


def _initial_step(f, t0, y0, k1, rtol, atol, hmax):
    """Hairer's starting-step heuristic."""
    n = len(y0)
    dnf = 0.0
    dny = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y0[i])
        dnf += (k1[i] / sc) ** 2
        dny += (y0[i] / sc) ** 2
    if dnf <= 1e-10 or dny <= 1e-10:
        h = 1e-6
    else:
        h = 0.01 * math.sqrt(dny / dnf)
    h = min(h, hmax)
    y1 = [y0[i] + h * k1[i] for i in range(n)]
    f1 = f(t0 + h, y1)
    der2 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y0[i])
        der2 += ((f1[i] - k1[i]) / sc) ** 2
    der2 = math.sqrt(der2) / h
    der12 = max(der2, math.sqrt(dnf))
    if der12 <= 1e-15:
        h1 = max(1e-6, h * 1e-3)
    else:
        h1 = (0.01 / der12) ** 0.2
    return min(100.0 * h, h1, hmax)


def _crosses(g0, g1, direction):
    up = g0 < 0.0 <= g1
    down = g0 > 0.0 >= g1
    return (up and direction >= 0) or (down and direction <= 0)


def _locate_event(f, t, y, k1, h, gfun, g_end, direction):
    """Bisect the crossing inside (t, t+h]; returns (time, state)."""
    a = 0.0
    ga = gfun(t, y)
    b = h
    gb = g_end
    yb = None
    tol = lambda s: 1e-12 * abs(t + s) + 1e-14
    it = 0
    while (b - a) > tol(b) and it < _BISECT_MAX_ITER:
        m = 0.5 * (a + b)
        ym = _substate(f, t, y, k1, m)
        gm = gfun(t + m, ym)
        if _crosses(ga, gm, direction):
            b, gb, yb = m, gm, ym
        else:
            a, ga = m, gm
        it += 1
    if yb is None:
        yb = _substate(f, t, y, k1, b)
    return t + b, yb


def integrate_callable(
    f: Callable,
    y0: Sequence[float],
    t0: float,
    t_end: float,
    rtol: float,
    atol: float,
    h0: float,
    hmax: float,
    max_steps: int,
    stride: int,
    fixed_step: float,
    nonneg: Sequence[int],
    events,
) -> RawResult:
    """Integrate y' = f(t, y) from t0 to t_end.

    `events` is a sequence of (gfun, direction, terminal) triples.  h0 <= 0
    selects the automatic starting step, hmax <= 0 means unbounded, and
    fixed_step > 0 disables error control (used for order measurements).
    """
    n = len(y0)
    y = [float(v) for v in y0]
    t = float(t0)
    if not t_end > t:
        raise ValueError("stop time must exceed the start time")
    if any(not math.isfinite(v) for v in y):
        raise ValueError("initial state must be finite")
    span = t_end - t
    if hmax <= 0.0:
        hmax = span
    hmax = min(hmax, span)

    k1 = f(t, y)
    if any(not math.isfinite(v) for v in k1):
        raise ValueError("field is not finite at the initial state")

    if fixed_step > 0.0:
        h = min(fixed_step, hmax)
    elif h0 > 0.0:
        h = min(h0, hmax)
    else:
        h = _initial_step(f, t, y, k1, rtol, atol, hmax)

    ts = [t]
    ys = [list(y)]
    g_prev = [gfun(t, y) for (gfun, _, _) in events]
    ev_records = []
    terminal_event = None
    status = None
    n_steps = 0
    n_accepted = 0
    facold = 1e-4
    rejected_last = False
    nonfinite_last = False
    end_tol = 1e-14 * max(1.0, abs(t_end))

    while True:
        if t_end - t <= end_tol:
            status = STATUS_STOP_TIME
            break
        if n_steps >= max_steps:
            status = STATUS_MAX_STEPS
            break
        h_try = min(h, hmax, t_end - t)
        if h_try < max(1e-15 * abs(t), 5e-292):
            status = STATUS_NON_FINITE if nonfinite_last else STATUS_STEP_UNDERFLOW
            break

        k3, k4, k5, k6, ynew = _stage_tail(f, t, y, k1, h_try)
        k7 = f(t + h_try, ynew)
        n_steps += 1

        bad = any(
            not math.isfinite(ynew[i]) or not math.isfinite(k7[i]) for i in range(n)
        )
        if fixed_step > 0.0:
            if bad:
                status = STATUS_NON_FINITE
                break
            err = 0.0
        else:
            if not bad:
                err = 0.0
                for i in range(n):
                    sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
                    e = h_try * (
                        E1 * k1[i]
                        + E3 * k3[i]
                        + E4 * k4[i]
                        + E5 * k5[i]
                        + E6 * k6[i]
                        + E7 * k7[i]
                    )
                    err += (e / sc) ** 2
                err = math.sqrt(err / n)
            if bad or not math.isfinite(err):
                nonfinite_last = True
                rejected_last = True
                h = 0.5 * h_try
                continue
            if err > 1.0:
                fac11 = err**EXPO1
                h = h_try / min(FAC_MAX_SHRINK, fac11 / SAFE)
                rejected_last = True
                nonfinite_last = False
                continue

        # Accepted.
        nonfinite_last = False
        t_new = t + h_try
        clamped = False
        for i in nonneg:
            yi = ynew[i]
            if yi < atol:
                if yi <= -10.0 * atol:
                    status = STATUS_NON_FINITE  # invariant-boundary breach
                    break
                if yi != 0.0:
                    ynew[i] = 0.0
                    clamped = True
        if status is not None:
            break

        crossings = []
        for j, (gfun, direction, terminal) in enumerate(events):
            g1 = gfun(t_new, ynew)
            if _crosses(g_prev[j], g1, direction):
                te, ye = _locate_event(f, t, y, k1, h_try, gfun, g1, direction)
                crossings.append((te, j, ye, terminal))
            g_prev[j] = g1
        if crossings:
            crossings.sort(key=lambda c: (c[0], c[1]))
            for te, j, ye, terminal in crossings:
                ev_records.append((j, te, list(ye)))
                if terminal:
                    ts.append(te)
                    ys.append(list(ye))
                    terminal_event = j
                    status = STATUS_TERMINAL_EVENT
                    break
        if status is not None:
            break

        k1 = f(t_new, ynew) if clamped else k7
        t = t_new
        y = ynew
        n_accepted += 1
        if n_accepted % stride == 0:
            ts.append(t)
            ys.append(list(y))

        if fixed_step > 0.0:
            h = fixed_step
        else:
            if err <= 0.0:
                fac = FAC_MAX_GROW
            else:
                fac11 = err**EXPO1
                fac = fac11 / facold**BETA
                fac = max(FAC_MAX_GROW, min(FAC_MAX_SHRINK, fac / SAFE))
            hnew = h_try / fac
            if rejected_last:
                hnew = min(hnew, h_try)
            h = min(hnew, hmax)
            facold = max(err, 1e-4)
            rejected_last = False

    if ts[-1] != t and status != STATUS_TERMINAL_EVENT:
        ts.append(t)
        ys.append(list(y))
    return RawResult(ts, ys, status, n_steps, n_accepted, ev_records, terminal_event)
