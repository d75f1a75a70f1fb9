"""Regime prediction, trajectory outcome analysis, rate fits and sweeps.

A run integrates the reduced system until the radius crosses the handoff
threshold, transforms into the regime chart, continues in chart time, and
then measures: the squared-eccentricity limit, angle divergence, whether the
physical collision time is finite, the radial-velocity envelope, and the
power-law rates the asymptotics predict.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .charts import (
    ChartId,
    RADIAL_INDEX,
    chart_ecc_vector,
    chart_field,
    chart_from_reduced,
    ecc_sq_coords,
    select_chart,
)
from .integrator import (
    Direction,
    EventSpec,
    IntegrationConfig,
    Termination,
    integrate,
)
from .model import DampingParams, ReducedState, reduced_field


class Regime(str, Enum):
    CIRCULARIZING = "circularizing"
    ECC_TO_ONE_FINITE_TIME = "ecc-to-one-finite-time"
    ECC_TO_ONE_INFINITE_TIME = "ecc-to-one-infinite-time"
    CRITICAL_SUB_HALF = "critical-sub-half"
    CRITICAL_SUPER_HALF = "critical-super-half"


OMEGA_FINITE = "finite"
OMEGA_INFINITE = "infinite"
OMEGA_UNDETERMINED = "undetermined"

P_UNBOUNDED = "unbounded"
P_LIMIT_VALUE = "limit-value"
P_TO_ZERO = "to-zero"
P_UNDETERMINED = "undetermined"


class PowerLawFit(NamedTuple):
    exponent: float
    r_squared: float


class OmegaVerdict(NamedTuple):
    kind: str
    estimate: Optional[float]


class PBehavior(NamedTuple):
    kind: str
    value: Optional[float]


# Observed-classification thresholds.
ECC_ZERO_TOL = 1e-3        # e^2 counted as zero
ECC_ONE_TOL = 1e-2         # |e^2 - 1| counted as one
ECC_CRITICAL_TOL = 1e-2    # |e^2 - 4 delta^2| at the critical attractor
CIRC_TREND_EXP = -0.2      # decaying-fit fallback for slow circularization
THETA_DIVERGED_TOTAL = 40.0 * math.pi
THETA_DIVERGED_TAIL = 1.0        # rad over the trailing decade: clearly not Cauchy
THETA_CONVERGED_TAIL = 1e-4      # rad over the trailing decade: Cauchy
NEAR_CRITICAL_BAND = 0.05


def predicted_regime(params: DampingParams) -> Regime:
    """Asymptotic regime from (gamma, alpha - beta + 3, delta) alone."""
    if params.gamma == 0.0:
        return (
            Regime.CRITICAL_SUB_HALF
            if params.delta < 0.5
            else Regime.CRITICAL_SUPER_HALF
        )
    if params.gamma > 0.0:
        return (
            Regime.ECC_TO_ONE_FINITE_TIME
            if params.alpha - params.beta + 3.0 > 0.0
            else Regime.ECC_TO_ONE_INFINITE_TIME
        )
    return Regime.CIRCULARIZING


def fit_power_law(samples) -> PowerLawFit:
    """Least-squares slope of log s against log tau over the trailing decade.

    `samples` is a sequence of (tau, s) pairs with tau and s strictly
    positive, at least 20 points, spanning at least one decade in tau.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 20:
        raise ValueError("need at least 20 (tau, s) samples")
    tau = pts[:, 0]
    s = pts[:, 1]
    if np.any(tau <= 0.0) or np.any(s <= 0.0):
        raise ValueError("power-law fit needs strictly positive samples")
    tmax = float(tau.max())
    if tmax / float(tau.min()) < 10.0:
        raise ValueError("samples must span at least one decade in tau")
    sel = tau >= tmax / 10.0
    x = np.log(tau[sel])
    y = np.log(s[sel])
    xm = x - x.mean()
    ym = y - y.mean()
    sxx = float(xm @ xm)
    if sxx == 0.0:
        raise ValueError("degenerate abscissa in power-law fit")
    slope = float(xm @ ym) / sxx
    ss_res = float(((ym - slope * xm) ** 2).sum())
    ss_tot = float((ym**2).sum())
    if ss_tot <= 1e-300:
        r2 = 1.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return PowerLawFit(slope, r2)


def collision_time_verdict(samples, margin: float = 0.15) -> OmegaVerdict:
    """Classify the physical-time tail from (tau, t) samples.

    Fits dt/dtau (secant slopes attributed to geometric-mean abscissae) to a
    power law tau^(-c) over the trailing decade: c > 1 + margin means the
    collision time is finite (reported with the tail-integral estimate),
    c < 1 - margin means infinite, anything else or a poor fit (r^2 < 0.9)
    is undetermined.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 20:
        return OmegaVerdict(OMEGA_UNDETERMINED, None)
    tau = pts[:, 0]
    t = pts[:, 1]
    if np.any(np.diff(tau) <= 0.0):
        raise ValueError("tau samples must be strictly increasing")
    tmax = float(tau.max())
    sel = tau >= tmax / 10.0
    if tau[sel].size < 10 or tau[sel].min() <= 0.0:
        return OmegaVerdict(OMEGA_UNDETERMINED, None)
    ta = tau[sel]
    tt = t[sel]
    # t already numerically converged over the trailing decade: the remaining
    # tail is below float resolution, so the collision time is finite
    if tt[-1] - tt[0] <= 1e-9 * max(1.0, abs(tt[-1])):
        return OmegaVerdict(OMEGA_FINITE, float(t[-1]))
    # decimate to at most ~400 log-spaced secants to tame finite differencing
    if ta.size > 401:
        idx = np.unique(
            np.searchsorted(ta, np.geomspace(ta[0], ta[-1], 401), side="left")
        )
        idx = idx[idx < ta.size]
        ta = ta[idx]
        tt = tt[idx]
    dt = np.diff(tt)
    dtau = np.diff(ta)
    good = dt > 0.0
    if good.sum() < 10:
        return OmegaVerdict(OMEGA_UNDETERMINED, None)
    rate = dt[good] / dtau[good]
    mid = np.sqrt(ta[:-1] * ta[1:])[good]
    x = np.log(mid)
    y = np.log(rate)
    xm = x - x.mean()
    ym = y - y.mean()
    sxx = float(xm @ xm)
    if sxx == 0.0:
        return OmegaVerdict(OMEGA_UNDETERMINED, None)
    slope = float(xm @ ym) / sxx
    inter = float(y.mean() - slope * x.mean())
    ss_res = float(((ym - slope * xm) ** 2).sum())
    ss_tot = float((ym**2).sum())
    r2 = 1.0 if ss_tot <= 1e-300 else max(0.0, 1.0 - ss_res / ss_tot)
    if r2 < 0.9:
        return OmegaVerdict(OMEGA_UNDETERMINED, None)
    c = -slope
    if c > 1.0 + margin:
        amp = math.exp(inter)
        tail = amp * tmax ** (1.0 - c) / (c - 1.0)
        return OmegaVerdict(OMEGA_FINITE, float(t[-1] + tail))
    if c < 1.0 - margin:
        return OmegaVerdict(OMEGA_INFINITE, None)
    return OmegaVerdict(OMEGA_UNDETERMINED, None)


@dataclass(frozen=True)
class OutcomeReport:
    """Measured asymptotics of a single run."""

    params: DampingParams
    regime_predicted: Regime
    regime_observed: Optional[Regime]
    chart: Optional[ChartId]
    ecc_sq_limit: Optional[float]
    theta_diverged: bool
    theta_total: Optional[float]
    theta_tail: Optional[float]
    omega: OmegaVerdict
    p_behavior: PBehavior
    fits: dict
    ecc_vector_limit: Optional[tuple]
    chart_final: Optional[tuple]
    flags: tuple = ()

    @property
    def determinate(self) -> bool:
        return self.regime_observed is not None

    def to_json_dict(self) -> dict:
        return {
            "params": {
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "delta": self.params.delta,
                "gamma": self.params.gamma,
            },
            "regime_predicted": self.regime_predicted.value,
            "regime_observed": (
                self.regime_observed.value if self.regime_observed else "undetermined"
            ),
            "chart": self.chart.value if self.chart else None,
            "ecc_sq_limit": self.ecc_sq_limit,
            "theta_diverged": self.theta_diverged,
            "theta_total": self.theta_total,
            "theta_tail": self.theta_tail,
            "omega": {"verdict": self.omega.kind, "estimate": self.omega.estimate},
            "p_behavior": {"kind": self.p_behavior.kind, "value": self.p_behavior.value},
            "fits": {
                k: {"exponent": v.exponent, "r2": v.r_squared}
                for k, v in self.fits.items()
            },
            "ecc_vector_limit": (
                list(self.ecc_vector_limit) if self.ecc_vector_limit else None
            ),
            "chart_final": list(self.chart_final) if self.chart_final else None,
            "flags": list(self.flags),
        }


def run_chart_for(params: DampingParams) -> ChartId:
    """Chart used by outcome runs.

    select_chart routes gamma = 0 to the first critical chart; runs with
    delta >= 1/2 converge only polynomially there, so they are handed to the
    second critical chart where the boundary attractor is hyperbolic.
    """
    chart = select_chart(params)
    if chart == ChartId.CRITICAL and params.delta >= 0.5:
        return ChartId.CRITICAL_L2
    return chart


def _chart_escape_events(chart: ChartId, params: DampingParams, r_escape: float):
    if chart == ChartId.GAMMA_NEG:
        return [EventSpec.component_event("chart-escape", 0, 1e4, Direction.UP, True)]
    if chart == ChartId.CRITICAL:
        return [EventSpec.component_event("chart-escape", 0, 1e7, Direction.UP, True)]
    if chart == ChartId.CRITICAL_L2:
        return [EventSpec.component_event("chart-escape", 0, 50.0, Direction.UP, True)]
    g = params.gamma
    if chart == ChartId.GAMMA_POS_A0:
        thr = r_escape ** (0.5 * g)
    else:
        thr = r_escape ** (0.5 * g / (1.0 + params.alpha))
    return [EventSpec.component_event("chart-escape", 0, thr, Direction.UP, True)]


def _reconstruct_p(chart: ChartId, params: DampingParams, states: np.ndarray):
    """Radial velocity along chart samples (masked where undefined)."""
    c1 = states[:, 0]
    c2 = states[:, 1]
    c3 = states[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        if chart == ChartId.GAMMA_POS_A0:
            mask = c1 > 0.0
            p = np.where(mask, c2 * c1 ** (-1.0 / params.gamma), np.nan)
        elif chart == ChartId.GAMMA_POS_APOS:
            mask = c1 > 0.0
            expo = (2.0 * params.beta - 4.0) / params.gamma
            p = np.where(mask, c2 * c1**expo, np.nan)
        elif chart == ChartId.GAMMA_NEG:
            mask = c3 > 0.0
            p = np.where(mask, c2 * c3 ** (-1.0 / params.gamma_tilde), np.nan)
        elif chart == ChartId.CRITICAL:
            mask = c3 > 0.0
            p = np.where(mask, c2 / c3, np.nan)
        else:  # CRITICAL_L2
            mask = c3 > 0.0
            p = np.where(mask, c1 / c3, np.nan)
    return p, mask


def _classify_p(tau: np.ndarray, p: np.ndarray, mask: np.ndarray) -> PBehavior:
    """Envelope-per-decade classification of the radial velocity."""
    ok = mask & np.isfinite(p) & (tau > 0.0)
    tau = tau[ok]
    p = p[ok]
    if tau.size < 30:
        return PBehavior(P_UNDETERMINED, None)
    tmax = float(tau.max())
    tmin = float(tau.min())
    n_dec = int(math.floor(math.log10(tmax / tmin)))
    if n_dec < 2:
        return PBehavior(P_UNDETERMINED, None)
    edges = [tmax / 10.0**k for k in range(n_dec + 1)][::-1]
    env = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (tau > lo) & (tau <= hi)
        if sel.sum() >= 3:
            env.append(float(np.abs(p[sel]).max()))
    if len(env) < 2 or env[0] == 0.0:
        return PBehavior(P_UNDETERMINED, None)
    ratio = env[-1] / env[0]
    last = (tau >= tmax / 10.0)
    if ratio > 2.0 and env[-1] >= max(env[:-1]) * 0.5:
        return PBehavior(P_UNBOUNDED, None)
    if ratio < 0.5:
        return PBehavior(P_TO_ZERO, None)
    c = float(np.median(p[last]))
    spread = float(np.max(np.abs(p[last] - c))) if last.sum() else math.inf
    if spread <= max(0.05 * abs(c), 1e-3):
        return PBehavior(P_LIMIT_VALUE, c)
    return PBehavior(P_UNDETERMINED, None)


def _theta_behavior(tau, theta, theta_start_of_run):
    """Total swept angle plus the trailing-decade contribution."""
    total = float(theta[-1] - theta_start_of_run)
    tmax = float(tau[-1])
    if tmax <= 0.0:
        return total, None
    i0 = int(np.searchsorted(tau, tmax / 10.0))
    i0 = min(i0, tau.size - 1)
    tail = float(theta[-1] - theta[i0])
    return total, tail


def observed_regime(params: DampingParams, *, ecc_sq_limit, theta_diverged,
                    theta_tail, omega: OmegaVerdict,
                    ecc_fit: Optional[PowerLawFit]) -> Optional[Regime]:
    """Match the measured outcome against the signature of each regime.

    The gamma sign enters only to split limits shared between regimes
    (e^2 -> 1 happens both for gamma > 0 and for critical delta >= 1/2).
    """
    if ecc_sq_limit is None:
        return None
    g = params.gamma
    if g < 0.0:
        near_zero = ecc_sq_limit < ECC_ZERO_TOL
        trending = (
            ecc_fit is not None
            and ecc_fit.exponent < CIRC_TREND_EXP
            and ecc_fit.r_squared > 0.9
            and ecc_sq_limit < 0.1
        )
        if (near_zero or trending) and theta_diverged and omega.kind == OMEGA_FINITE:
            return Regime.CIRCULARIZING
        return None
    if g == 0.0:
        target = 4.0 * params.delta**2
        if params.delta < 0.5 and abs(ecc_sq_limit - target) < ECC_CRITICAL_TOL:
            return Regime.CRITICAL_SUB_HALF
        if params.delta >= 0.5 and abs(ecc_sq_limit - 1.0) < ECC_ONE_TOL:
            return Regime.CRITICAL_SUPER_HALF
        return None
    converged_theta = theta_tail is not None and theta_tail < THETA_CONVERGED_TAIL
    if abs(ecc_sq_limit - 1.0) < ECC_ONE_TOL and not theta_diverged and converged_theta:
        if omega.kind == OMEGA_FINITE:
            return Regime.ECC_TO_ONE_FINITE_TIME
        if omega.kind == OMEGA_INFINITE:
            return Regime.ECC_TO_ONE_INFINITE_TIME
    return None


def simulate_outcome(
    params: DampingParams,
    ic: ReducedState,
    config: Optional[IntegrationConfig] = None,
    *,
    r_switch: float = 0.5,
    r_escape: float = 1e3,
    t_cap: float = 1e4,
) -> OutcomeReport:
    """Run one initial condition to its collision asymptotics and measure it.

    config.stop_time is the chart-time budget (default 1e4); tolerances come
    from config as well.  Escapes and early terminations yield undetermined
    fields, never exceptions.
    """
    if ic.l <= 0.0:
        raise ValueError("outcome runs need l > 0")
    if config is None:
        config = IntegrationConfig(stop_time=1e4)
    tau_end = config.stop_time if config.stop_time else 1e4
    flags = []
    if abs(params.gamma) < NEAR_CRITICAL_BAND and params.gamma != 0.0:
        flags.append("near-critical")

    predicted = predicted_regime(params)
    chart = run_chart_for(params)

    def undetermined(extra_flags):
        return OutcomeReport(
            params=params,
            regime_predicted=predicted,
            regime_observed=None,
            chart=chart,
            ecc_sq_limit=None,
            theta_diverged=False,
            theta_total=None,
            theta_tail=None,
            omega=OmegaVerdict(OMEGA_UNDETERMINED, None),
            p_behavior=PBehavior(P_UNDETERMINED, None),
            fits={},
            ecc_vector_limit=None,
            chart_final=None,
            flags=tuple(flags + list(extra_flags)),
        )

    # Leg A: reduced coordinates until the chart handoff radius.
    state = ic
    theta0 = ic.theta
    if ic.r >= r_switch:
        cfg_a = IntegrationConfig(
            rtol=config.rtol,
            atol=config.atol,
            max_steps=config.max_steps,
            stop_time=ic.t + t_cap,
            t_start=ic.t,
        )
        events = [
            EventSpec.component_event("handoff", 0, r_switch, Direction.DOWN, True),
            EventSpec.component_event("escape", 0, r_escape, Direction.UP, True),
        ]
        traj_a = integrate(reduced_field(params), ic.as_vector(), cfg_a, events)
        if traj_a.termination == Termination.TERMINAL_EVENT:
            if traj_a.terminal_event == "escape":
                return undetermined(["escape"])
        elif traj_a.termination == Termination.STOP_TIME:
            return undetermined(["no-handoff"])
        else:
            return undetermined([f"reduced-{traj_a.termination.value}"])
        r_, p_, l_, th_, t_ = traj_a.final_state
        if l_ <= 0.0:
            return undetermined(["handoff-zero-l"])
        state = ReducedState(r=r_, p=p_, l=l_, theta=th_, t=t_)

    # Leg B: the regime chart.
    c0 = chart_from_reduced(chart, params, state)
    cfg_b = IntegrationConfig(
        rtol=config.rtol,
        atol=config.atol,
        max_steps=config.max_steps,
        stop_time=tau_end,
        h_max=tau_end / 2000.0,
        sample_stride=config.sample_stride,
    )
    traj_b = integrate(
        chart_field(chart, params),
        c0.as_vector(),
        cfg_b,
        _chart_escape_events(chart, params, r_escape),
    )
    if traj_b.termination == Termination.TERMINAL_EVENT:
        return undetermined(["chart-escape"])
    if traj_b.termination != Termination.STOP_TIME:
        flags.append(f"chart-{traj_b.termination.value}")
    tau = traj_b.times
    Y = traj_b.states
    if tau.size < 50 or tau[-1] < 100.0:
        # not enough chart-time span for tail analysis
        return undetermined(["short-run"])

    ecc = np.asarray(
        ecc_sq_coords(chart, params, Y[:, 0], Y[:, 1], Y[:, 2]), dtype=float
    )
    tmax = float(tau[-1])
    window = tau >= 0.9 * tmax
    if window.sum() < 25:
        window = np.zeros_like(tau, dtype=bool)
        window[-25:] = True
    ecc_limit = float(np.median(ecc[window]))

    theta_total, theta_tail = _theta_behavior(tau, Y[:, 3], theta0)
    theta_diverged = (
        theta_total > THETA_DIVERGED_TOTAL
        and theta_tail is not None
        and theta_tail > THETA_DIVERGED_TAIL
    )

    omega = collision_time_verdict(np.column_stack([tau, Y[:, 4]]))

    p_series, p_mask = _reconstruct_p(chart, params, Y)
    p_behavior = _classify_p(tau, p_series, p_mask)

    fits = {}
    pos = tau > 0.0

    def try_fit(name, series):
        sel = pos & np.isfinite(series) & (series > 0.0)
        if sel.sum() >= 20:
            try:
                fits[name] = fit_power_law(np.column_stack([tau[sel], series[sel]]))
            except ValueError:
                pass

    try_fit("ecc_sq", ecc)
    radial = Y[:, RADIAL_INDEX[chart]]
    radial_name = {"gamma-pos-a0": "y", "gamma-pos": "q1", "gamma-neg": "x",
                   "critical": "rho1", "critical-l2": "rho2"}[chart.value]
    try_fit(radial_name, radial)
    if chart == ChartId.GAMMA_NEG:
        try_fit("hopf_dist_sq", (Y[:, 0] - 1.0) ** 2 + Y[:, 1] ** 2)

    ecc_vec = None
    if params.gamma > 0.0:
        ecc_vec = chart_ecc_vector(chart, params, Y[-1])

    observed = observed_regime(
        params,
        ecc_sq_limit=ecc_limit,
        theta_diverged=theta_diverged,
        theta_tail=theta_tail,
        omega=omega,
        ecc_fit=fits.get("ecc_sq"),
    )
    return OutcomeReport(
        params=params,
        regime_predicted=predicted,
        regime_observed=observed,
        chart=chart,
        ecc_sq_limit=ecc_limit,
        theta_diverged=theta_diverged,
        theta_total=theta_total,
        theta_tail=theta_tail,
        omega=omega,
        p_behavior=p_behavior,
        fits=fits,
        ecc_vector_limit=ecc_vec,
        chart_final=tuple(float(v) for v in Y[-1]),
        flags=tuple(flags),
    )


STANDARD_L0 = 0.9
RETRY_L0 = 0.5


def standard_ic(l0: float = STANDARD_L0) -> ReducedState:
    """Inward-drifting, initially near-circular starting state for sweeps."""
    return ReducedState(r=1.0, p=0.0, l=l0, theta=0.0, t=0.0)


@dataclass(frozen=True)
class SweepEntry:
    alpha: float
    beta: float
    delta: float
    gamma: float
    predicted: Regime
    observed: Optional[Regime]
    agree: bool
    flags: tuple


@dataclass(frozen=True)
class RegimeDiagram:
    """Grid of predicted vs observed regimes at fixed delta."""

    delta: float
    entries: tuple

    def agreement(self) -> float:
        """Fraction of determinate grid points whose observation matches."""
        det = [e for e in self.entries if e.observed is not None]
        if not det:
            return 0.0
        return sum(1 for e in det if e.agree) / len(det)

    def to_csv_lines(self):
        yield "alpha,beta,delta,gamma,predicted,observed,agree,flags"
        for e in self.entries:
            obs = e.observed.value if e.observed else "undetermined"
            flags = ";".join(e.flags)
            # repr gives the shortest decimal that round-trips the float
            yield (
                f"{e.alpha!r},{e.beta!r},{e.delta!r},{e.gamma!r},"
                f"{e.predicted.value},{obs},{str(e.agree).lower()},{flags}"
            )

    def write_csv(self, fobj):
        for line in self.to_csv_lines():
            fobj.write(line + "\n")


def _sweep_point(args):
    alpha, beta, delta, rtol, atol, tau_end, max_steps, stride = args
    params = DampingParams(alpha, beta, delta)
    cfg = IntegrationConfig(
        rtol=rtol, atol=atol, stop_time=tau_end, max_steps=max_steps,
        sample_stride=stride,
    )
    report = simulate_outcome(params, standard_ic(), cfg)
    flags = list(report.flags)
    if "escape" in flags:
        report = simulate_outcome(params, standard_ic(RETRY_L0), cfg)
        flags = list(report.flags) + ["retry-l0-0.5"]
    observed = report.regime_observed
    return SweepEntry(
        alpha=alpha,
        beta=beta,
        delta=delta,
        gamma=params.gamma,
        predicted=report.regime_predicted,
        observed=observed,
        agree=observed == report.regime_predicted,
        flags=tuple(flags),
    )


def sweep(
    alphas: Sequence[float],
    betas: Sequence[float],
    delta: float,
    config: Optional[IntegrationConfig] = None,
    *,
    jobs: int = 1,
) -> RegimeDiagram:
    """Predicted vs observed regime over the (alpha, beta) grid at one delta.

    Points within the near-critical band are flagged but still run; per-point
    failures become undetermined entries.  Results merge in grid order, so
    the diagram is identical for any job count.
    """
    alphas = [float(a) for a in alphas]
    betas = [float(b) for b in betas]
    if any(a < 0 for a in alphas) or any(b < 0 for b in betas):
        raise ValueError("grid values must be nonnegative")
    if any(a == 0.0 for a in alphas) and any(b == 0.0 for b in betas):
        raise ValueError("the grid must exclude (alpha, beta) = (0, 0)")
    if config is None:
        config = IntegrationConfig(stop_time=1e4)
    tasks = [
        (a, b, float(delta), config.rtol, config.atol,
         config.stop_time or 1e4, config.max_steps, config.sample_stride)
        for a in alphas
        for b in betas
    ]
    if jobs is None or jobs < 1:
        jobs = 1
    if jobs == 1:
        entries = [_sweep_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_sweep_point, tasks))
    return RegimeDiagram(delta=float(delta), entries=tuple(entries))
