"""Compiled backend vs pure-Python reference: same math, same decisions."""

import numpy as np
import pytest

from circkep._core import kinds, pykernel, rhs_py

speedups = pytest.importorskip("circkep._core._speedups")


def _random_state(rng, kind):
    if kind == kinds.KIND_CARTESIAN:
        u = rng.uniform(0.3, 2.0, size=2) * rng.choice([-1.0, 1.0], size=2)
        v = rng.uniform(-1.5, 1.5, size=2)
        return [u[0], u[1], v[0], v[1]]
    base = rng.uniform(0.2, 2.0, size=3)
    if kind in (kinds.KIND_GAMMA_NEG, kinds.KIND_CRITICAL):
        base[1] = rng.uniform(-1.0, 1.0)
    if kind == kinds.KIND_CRITICAL_L2:
        base[0] = rng.uniform(-1.5, 1.5)
    return [base[0], base[1], base[2], rng.uniform(-3, 3), rng.uniform(0, 2)]


def _params_for(kind, rng):
    if kind in (kinds.KIND_CRITICAL, kinds.KIND_CRITICAL_L2):
        alpha = rng.uniform(0.0, 2.0)
        beta = (3.0 - alpha) / 2.0
    elif kind == kinds.KIND_GAMMA_NEG:
        alpha, beta = rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.8)
    elif kind == kinds.KIND_GAMMA_POS_A0:
        alpha, beta = 0.0, rng.uniform(1.6, 3.0)
    elif kind == kinds.KIND_GAMMA_POS_APOS:
        alpha, beta = rng.uniform(0.2, 2.0), rng.uniform(1.5, 3.0)
    else:
        alpha, beta = rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)
    gamma = alpha + 2.0 * beta - 3.0
    return (alpha, beta, rng.uniform(0.05, 1.5), gamma, -gamma)


@pytest.mark.parametrize("kind", kinds.ALL_KINDS)
def test_rhs_agreement(kind):
    rng = np.random.default_rng(100 + kind)
    for _ in range(100):
        P = _params_for(kind, rng)
        y = _random_state(rng, kind)
        a = np.asarray(rhs_py.rhs(kind, P, y))
        b = np.asarray(speedups.rhs_eval(kind, P, y))
        scale = np.maximum(np.abs(a), 1.0)
        assert np.max(np.abs(a - b) / scale) < 1e-13


def _integrate_both(kind, P, y0, t_end, events=()):
    args = (kind, P, y0, 0.0, t_end, 1e-9, 1e-12, 0.0, 0.0, 2_000_000, 1, 0.0,
            list(events))
    return pykernel.integrate_kernel(*args), speedups.integrate_kernel(*args)


def test_trajectory_agreement_reduced():
    # stop well short of the collision: the raw reduced flow amplifies
    # roundoff without bound as r -> 0
    P = (0.0, 1.0, 0.1, -1.0, 1.0)
    py, cy = _integrate_both(kinds.KIND_REDUCED, P, [1.0, 0.0, 0.9, 0.0, 0.0], 2.0)
    assert py.status == cy[2]
    ya = np.asarray(py.states)[-1]
    yb = np.asarray(cy[1])[-1]
    scale = np.maximum(np.abs(ya), 1.0)
    assert np.max(np.abs(ya - yb) / scale) < 1e-7


def test_trajectory_agreement_chart():
    P = (1.0, 0.0, 0.1, -2.0, 2.0)
    y0 = [1.2, 0.1, 0.6, 0.0, 0.0]
    py, cy = _integrate_both(kinds.KIND_GAMMA_NEG, P, y0, 50.0)
    ya = np.asarray(py.states)[-1]
    yb = np.asarray(cy[1])[-1]
    assert np.max(np.abs(ya - yb)) < 1e-7


def test_event_agreement():
    P = (0.0, 1.0, 0.1, -1.0, 1.0)
    ev = [(0, 0.5, -1, True)]
    py, cy = _integrate_both(kinds.KIND_REDUCED, P, [1.0, 0.0, 0.9, 0.0, 0.0],
                             100.0, ev)
    assert py.status == kinds.STATUS_TERMINAL_EVENT == cy[2]
    assert abs(py.times[-1] - cy[0][-1]) < 1e-9


def test_backend_name_reports():
    from circkep import backend_name

    assert backend_name() in ("compiled", "python")
