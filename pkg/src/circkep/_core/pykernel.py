"""Pure-Python kernel backend: same surface as the compiled module."""

from . import rhs_py, steploop
from .kinds import NONNEG


def rhs_eval(kind, P, y):
    return rhs_py.rhs(kind, P, y)


def integrate_kernel(
    kind,
    P,
    y0,
    t0,
    t_end,
    rtol,
    atol,
    h0,
    hmax,
    max_steps,
    stride,
    fixed_step,
    events,
):
    """Integrate a built-in kernel; events are (index, threshold, direction,
    terminal) component crossings."""
    P = tuple(float(v) for v in P)

    def f(t, y):
        return rhs_py.rhs(kind, P, y)

    def make_g(idx, thr):
        return lambda t, y: y[idx] - thr

    ev = [(make_g(i, c), d, bool(term)) for (i, c, d, term) in events]
    return steploop.integrate_callable(
        f,
        y0,
        t0,
        t_end,
        rtol,
        atol,
        h0,
        hmax,
        max_steps,
        stride,
        fixed_step,
        NONNEG[kind],
        ev,
    )
