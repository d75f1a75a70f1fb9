"""Acceptance checks: the package's verifiable claims, each with pinned
tolerances.  `circkep verify` prints one pass/fail line per check and the
pytest suite asserts each one.
"""

from __future__ import annotations

import fnmatch
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .charts import ChartId, chart_field, chart_from_reduced, reduced_from_chart
from .equilibria import (
    critical_boundary_equilibrium,
    critical_interior_equilibrium,
    eigenvalues_small,
    gamma_pos_equilibrium,
    numeric_jacobian,
)
from .integrator import IntegrationConfig, integrate
from .model import (
    CartesianState,
    DampingParams,
    ReducedState,
    cartesian_field,
    observables,
    reduced_ecc_sq,
    reduced_field,
    undamped_cartesian_field,
)
from .regime import (
    OMEGA_FINITE,
    OMEGA_INFINITE,
    P_LIMIT_VALUE,
    P_TO_ZERO,
    P_UNBOUNDED,
    simulate_outcome,
    standard_ic,
    sweep,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class Check:
    name: str
    quick: bool
    fn: Callable


def _outcome(alpha, beta, delta, tau_end=1e4):
    params = DampingParams(alpha, beta, delta)
    return simulate_outcome(params, standard_ic(),
                            IntegrationConfig(stop_time=tau_end))


# --- criterion 1: exact critical solution -------------------------------

def check_critical_closed_form():
    delta, l0 = 0.3, 1.0
    params = DampingParams(1.0, 1.0, delta)
    s = 1.0 - 4.0 * delta * delta
    ic = [l0 * l0 / s, -2.0 * delta * math.sqrt(s) / l0, l0, 0.0, 0.0]
    omega = l0**3 / (3.0 * delta * s**1.5)
    cfg = IntegrationConfig(rtol=1e-11, atol=1e-14, stop_time=0.9 * omega)
    traj = integrate(reduced_field(params), ic, cfg)
    l_exact = (l0**3 - 3.0 * delta * s**1.5 * traj.times) ** (1.0 / 3.0)
    rel = float(np.max(np.abs(traj.states[:, 2] - l_exact) / l_exact))
    return rel <= 1e-6, f"max rel l(t) error {rel:.2e} (tol 1e-6), omega={omega:.6f}"


# --- criterion 2: critical eccentricity limits ---------------------------

def _check_critical_ecc(delta, target, tol):
    rep = _outcome(1.0, 1.0, delta)
    if rep.ecc_sq_limit is None:
        return False, "undetermined"
    err = abs(rep.ecc_sq_limit - target)
    return err <= tol, f"ecc_sq {rep.ecc_sq_limit:.8f} vs {target} (err {err:.2e}, tol {tol})"


# --- criterion 3: circularization ----------------------------------------

def _check_circularization(alpha, beta, delta):
    rep = _outcome(alpha, beta, delta)
    if rep.ecc_sq_limit is None:
        return False, "undetermined"
    ok = (
        rep.ecc_sq_limit < 1e-3
        and rep.theta_total > 40.0 * math.pi
        and rep.omega.kind == OMEGA_FINITE
    )
    return ok, (
        f"ecc_sq {rep.ecc_sq_limit:.2e} (<1e-3), dtheta {rep.theta_total:.0f} "
        f"(>{40*math.pi:.0f}), omega {rep.omega.kind}"
    )


# --- criterion 4: zero-Hopf decay rate -----------------------------------

def check_hopf_decay_rate():
    # gamma_tilde = 2 run: target exponent -2(alpha+beta)/gamma_tilde = -1
    rep = _outcome(1.0, 0.0, 0.1)
    fit = rep.fits.get("hopf_dist_sq")
    if fit is None:
        return False, "no hopf_dist_sq fit"
    ok = abs(fit.exponent + 1.0) <= 0.15 and fit.r_squared > 0.98
    return ok, f"exponent {fit.exponent:.4f} (target -1.0 +/- 0.15), r2 {fit.r_squared:.4f} (>0.98)"


def check_hopf_decay_formula():
    # independent parameter point, checked against the formula itself
    rep = _outcome(0.0, 1.0, 0.1)
    params = rep.params
    target = -2.0 * (params.alpha + params.beta) / params.gamma_tilde
    fit = rep.fits.get("hopf_dist_sq")
    if fit is None:
        return False, "no hopf_dist_sq fit"
    ok = abs(fit.exponent - target) <= 0.15 * abs(target)
    return ok, f"exponent {fit.exponent:.4f} vs formula {target} (15% tol)"


# --- criterion 5: gamma > 0 attractor and rates ---------------------------

def check_gamma_pos_attractor():
    rep = _outcome(1.0, 2.0, 0.5)
    if rep.chart_final is None:
        return False, "undetermined"
    v11 = rep.chart_final[1]
    theta_f = rep.chart_final[3]
    fit = rep.fits.get("q1")
    ev = rep.ecc_vector_limit
    checks = {
        "v11": abs(v11 - (-(0.5 ** -0.5))) < 0.01,
        "q1_fit": fit is not None and abs(fit.exponent + 0.5) <= 0.075,
        "ecc": abs(rep.ecc_sq_limit - 1.0) <= 1e-3,
        "theta_tail": rep.theta_tail is not None and rep.theta_tail < 1e-4,
        "ecc_vec": ev is not None
        and math.hypot(ev[0] + math.cos(theta_f), ev[1] + math.sin(theta_f)) < 0.01,
    }
    detail = (
        f"v11 {v11:.7f} (vs -1.4142136), q1 exp "
        f"{fit.exponent if fit else float('nan'):.4f}, ecc {rep.ecc_sq_limit:.6f}, "
        f"theta tail {rep.theta_tail:.2e}, failed={[k for k, v in checks.items() if not v]}"
    )
    return all(checks.values()), detail


# --- criterion 6: collision-time dichotomy --------------------------------

def _check_collision_time(alpha, beta, delta, expected):
    rep = _outcome(alpha, beta, delta)
    ok = rep.omega.kind == expected
    est = f", estimate {rep.omega.estimate:.4f}" if rep.omega.estimate else ""
    return ok, f"omega {rep.omega.kind} (expected {expected}){est}"


# --- criterion 7: radial-velocity trichotomy ------------------------------

def _check_p(beta, expected, delta=0.5):
    rep = _outcome(1.0, beta, delta)
    if rep.p_behavior.kind != expected:
        return False, f"p {rep.p_behavior.kind} (expected {expected})"
    if expected == P_LIMIT_VALUE:
        target = -(delta ** (-0.5))
        err = abs(rep.p_behavior.value - target) / abs(target)
        return err < 0.01, f"p limit {rep.p_behavior.value:.6f} vs {target:.6f} (rel {err:.2e})"
    return True, f"p {rep.p_behavior.kind}"


# --- criterion 8: equilibrium algebra --------------------------------------

def check_equilibrium_algebra():
    fails = []
    # gamma-pos closed-form vs numeric spectrum over a (alpha, delta) grid
    for alpha in (0.5, 1.0, 2.0):
        for delta in (0.25, 1.0, 4.0):
            params = DampingParams(alpha, 2.0, delta)
            rep = gamma_pos_equilibrium(params)  # raises if mismatch > 1e-8
            rate = delta ** (1.0 / (1.0 + alpha))
            want = sorted([0.0, -rate, -(1.0 + alpha) * rate])
            got = sorted(z.real for z in rep.eigenvalues)
            if max(abs(a - b) for a, b in zip(want, got)) > 1e-6:
                fails.append(f"gp({alpha},{delta})")
    # critical det J closed form
    for delta in (0.1, 0.2, 0.4):
        rep = critical_interior_equilibrium(DampingParams(1.0, 1.0, delta))
        det_closed = (2 * delta + 1) ** 4 * (1 - 2 * delta) ** 4
        if abs(rep.extras["det_j"] - det_closed) >= 1e-10:
            fails.append(f"detJ({delta})")
    # boundary root: residual and the alpha=0, delta=1 closed form
    rep = critical_boundary_equilibrium(DampingParams(0.0, 1.5, 1.0))
    if abs(rep.extras["residual"]) >= 1e-12:
        fails.append("v1*-residual")
    if abs(rep.location[0] - (1.0 - math.sqrt(3.0))) >= 1e-12:
        fails.append("v1*(0,1)")
    return not fails, f"failed={fails}" if fails else "all closed forms verified"


# --- criterion 9: structural invariants ------------------------------------

def _rand_states(rng, n):
    for _ in range(n):
        r = rng.uniform(0.2, 3.0)
        p = rng.uniform(-1.5, 1.5)
        l = rng.uniform(0.1, 1.8)
        theta = rng.uniform(-3.0, 3.0)
        yield ReducedState(r=r, p=p, l=l, theta=theta)


def check_invariants_observables():
    from .model import cartesian_from_reduced

    rng = np.random.default_rng(7)
    dummy = DampingParams(1.0, 1.0, 0.5)
    worst_id = worst_lag = 0.0
    for s in _rand_states(rng, 50):
        cs = cartesian_from_reduced(s)
        ob = observables(dummy, cs)
        scalar = reduced_ecc_sq(s.r, s.p, s.l)
        worst_id = max(worst_id, abs(ob.ecc_sq - scalar) / max(1.0, abs(scalar)))
        lag = abs(
            math.hypot(*cs.u)
            + ob.ecc_vector[0] * cs.u[0]
            + ob.ecc_vector[1] * cs.u[1]
            - ob.ang_momentum**2
        )
        worst_lag = max(worst_lag, lag)
    ok = worst_id <= 1e-10 and worst_lag <= 1e-10
    return ok, f"ecc identity rel {worst_id:.2e}, conic identity {worst_lag:.2e} (tol 1e-10)"


def check_invariants_conservation():
    # drag-free ellipse, e = 0.75, two-plus periods short of t = 100
    e, a = 0.75, 1.0
    ic = [a * (1 - e), 0.0, 0.0, math.sqrt((1 + e) / (a * (1 - e)))]
    cfg = IntegrationConfig(rtol=1e-12, atol=1e-14, stop_time=100.0)
    traj = integrate(undamped_cartesian_field(), ic, cfg)
    dummy = DampingParams(1.0, 1.0, 0.5)
    Y = traj.states
    ob0 = observables(dummy, CartesianState((Y[0, 0], Y[0, 1]), (Y[0, 2], Y[0, 3])))
    worst = 0.0
    for i in range(0, len(Y), max(1, len(Y) // 500)):
        ob = observables(dummy, CartesianState((Y[i, 0], Y[i, 1]), (Y[i, 2], Y[i, 3])))
        worst = max(
            worst,
            abs(ob.energy - ob0.energy),
            abs(ob.ang_momentum - ob0.ang_momentum),
            math.hypot(ob.ecc_vector[0] - ob0.ecc_vector[0],
                       ob.ecc_vector[1] - ob0.ecc_vector[1]),
        )
    return worst < 1e-8, f"max drift of E, l, ecc vector over [0,100]: {worst:.2e} (tol 1e-8)"


def check_invariants_roundtrips():
    rng = np.random.default_rng(11)
    cases = [
        (ChartId.GAMMA_NEG, DampingParams(1.0, 0.0, 0.1)),
        (ChartId.GAMMA_NEG, DampingParams(0.0, 1.0, 0.1)),
        (ChartId.GAMMA_POS_APOS, DampingParams(1.0, 2.0, 0.5)),
        (ChartId.GAMMA_POS_A0, DampingParams(0.0, 2.0, 0.3)),
        (ChartId.CRITICAL, DampingParams(1.0, 1.0, 0.3)),
        (ChartId.CRITICAL_L2, DampingParams(1.0, 1.0, 0.7)),
    ]
    worst = 0.0
    for chart, params in cases:
        for s in _rand_states(rng, 25):
            c = chart_from_reduced(chart, params, s)
            b = reduced_from_chart(chart, params, c)
            worst = max(
                worst,
                abs(b.r - s.r) / s.r,
                abs(b.p - s.p) / max(1.0, abs(s.p)),
                abs(b.l - s.l) / s.l,
            )
    return worst < 1e-12, f"max chart round-trip rel error {worst:.2e} (tol 1e-12)"


def check_invariants_pushforward():
    from .charts import ChartState, chart_rhs
    from .model import reduced_rhs

    rng = np.random.default_rng(13)
    cases = [
        (ChartId.GAMMA_NEG, DampingParams(1.0, 0.0, 0.1)),
        (ChartId.GAMMA_POS_APOS, DampingParams(1.0, 2.0, 0.5)),
        (ChartId.GAMMA_POS_A0, DampingParams(0.0, 2.0, 0.3)),
        (ChartId.CRITICAL, DampingParams(1.0, 1.0, 0.3)),
        (ChartId.CRITICAL_L2, DampingParams(1.0, 1.0, 0.7)),
    ]
    worst = 0.0
    for chart, params in cases:
        for _ in range(10):
            coords = rng.uniform(0.4, 1.6, size=3)
            if chart in (ChartId.CRITICAL, ChartId.GAMMA_NEG):
                coords[1] = rng.uniform(-0.8, 0.8)   # signed radial velocity
            if chart == ChartId.CRITICAL_L2:
                coords[0] = rng.uniform(-1.2, -0.2)  # inward v1, mu1 stays > 0
            c = ChartState(chart, *coords, theta=0.3, t=0.1)
            v0 = np.array(c.as_vector())

            def mapped(vec):
                st = ChartState(chart, vec[0], vec[1], vec[2], vec[3], vec[4])
                return np.array(reduced_from_chart(chart, params, st).as_vector())

            J = numeric_jacobian(mapped, v0, scale=1e-7)
            fc = chart_rhs(params, c)
            fr = reduced_rhs(params, reduced_from_chart(chart, params, c))
            lhs = J @ fc
            rhs = fc[4] * fr
            rel = np.max(np.abs(lhs - rhs)) / max(1e-12, np.max(np.abs(rhs)))
            worst = max(worst, rel)
    return worst < 1e-6, f"max pushforward rel error {worst:.2e} (tol 1e-6)"


def _scaling_error(field, lam=4.0, mu=0.125, t_total=2.0):
    """u2(t) := lam u1(mu t) must solve the same system when mu^2 lam^3 = 1."""
    u0 = [1.0, 0.0, 0.3, 0.9]
    y1 = list(u0)
    y2 = [lam * u0[0], lam * u0[1], lam * mu * u0[2], lam * mu * u0[3]]
    t1 = t2 = 0.0
    worst = 0.0
    for k in range(1, 21):
        tk = t_total * k / 20.0
        c1 = IntegrationConfig(rtol=1e-11, atol=1e-13, stop_time=mu * tk, t_start=t1)
        y1 = list(integrate(field, y1, c1).final_state)
        t1 = mu * tk
        c2 = IntegrationConfig(rtol=1e-11, atol=1e-13, stop_time=tk, t_start=t2)
        y2 = list(integrate(field, y2, c2).final_state)
        t2 = tk
        pred = [lam * y1[0], lam * y1[1], lam * mu * y1[2], lam * mu * y1[3]]
        scale = max(abs(v) for v in pred)
        worst = max(worst, max(abs(a - b) for a, b in zip(y2, pred)) / scale)
    return worst


def check_invariants_scaling():
    err0 = _scaling_error(undamped_cartesian_field())
    err1 = _scaling_error(cartesian_field(DampingParams(1.0, 1.0, 0.3)))
    ok = err0 < 1e-6 and err1 < 1e-6
    return ok, f"scaling rel error: drag-free {err0:.2e}, critical {err1:.2e} (tol 1e-6)"


# --- criterion 10: regime diagram ------------------------------------------

def make_diagram_check(jobs: Optional[int]):
    def check():
        grid = [0.25 + 0.5 * i for i in range(5)]
        diagram = sweep(grid, grid, 0.2, IntegrationConfig(stop_time=1e4),
                        jobs=jobs or 1)
        considered = [e for e in diagram.entries if "near-critical" not in e.flags]
        det = [e for e in considered if e.observed is not None]
        if not det:
            return False, "no determinate points"
        rate = sum(1 for e in det if e.agree) / len(det)
        return rate >= 0.95, (
            f"agreement {rate:.3f} over {len(det)}/{len(considered)} determinate "
            f"points (need >= 0.95)"
        )

    return check


CHECKS = [
    Check("critical-closed-form", True, check_critical_closed_form),
    Check("critical-ecc-sub-0.2", True, lambda: _check_critical_ecc(0.2, 0.16, 1e-4)),
    Check("critical-ecc-sub-0.3", True, lambda: _check_critical_ecc(0.3, 0.36, 1e-4)),
    Check("critical-ecc-super-0.7", True, lambda: _check_critical_ecc(0.7, 1.0, 1e-3)),
    Check("circularization-b1", True, lambda: _check_circularization(0.0, 1.0, 0.1)),
    Check("circularization-b05", True, lambda: _check_circularization(1.0, 0.5, 0.2)),
    Check("zero-hopf-decay-rate", True, check_hopf_decay_rate),
    Check("zero-hopf-decay-formula", True, check_hopf_decay_formula),
    Check("gamma-pos-attractor", True, check_gamma_pos_attractor),
    Check("collision-time-finite", True,
          lambda: _check_collision_time(2.0, 2.0, 0.5, OMEGA_FINITE)),
    Check("collision-time-infinite", True,
          lambda: _check_collision_time(0.0, 4.0, 0.1, OMEGA_INFINITE)),
    Check("p-unbounded", True, lambda: _check_p(1.5, P_UNBOUNDED)),
    Check("p-limit-value", True, lambda: _check_p(2.0, P_LIMIT_VALUE)),
    Check("p-to-zero", True, lambda: _check_p(2.5, P_TO_ZERO)),
    Check("equilibrium-algebra", True, check_equilibrium_algebra),
    Check("invariants-observables", True, check_invariants_observables),
    Check("invariants-conservation", True, check_invariants_conservation),
    Check("invariants-roundtrips", True, check_invariants_roundtrips),
    Check("invariants-pushforward", True, check_invariants_pushforward),
    Check("invariants-scaling", True, check_invariants_scaling),
    Check("regime-diagram", False, make_diagram_check(None)),
]


def run_checks(name_filter=None, quick=False, jobs=None):
    """Run the (filtered) acceptance checks, returning CheckResult rows."""
    results = []
    for check in CHECKS:
        if quick and not check.quick:
            continue
        if name_filter and not fnmatch.fnmatch(check.name, name_filter):
            continue
        fn = check.fn
        if check.name == "regime-diagram" and jobs:
            fn = make_diagram_check(jobs)
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"exception: {exc!r}"
        results.append(
            CheckResult(check.name, bool(passed), detail, time.perf_counter() - t0)
        )
    return results
