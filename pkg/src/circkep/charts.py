"""Singularity-rescaling charts for the collision asymptotics.

Each regime of the drag law gets one chart: a weighted power-law change of
variables on (r, p, l) together with a rescaled clock in which the collision
dynamics become a regular flow with (near-)equilibrium structure.  Chart
states co-integrate the physical angle theta and time t; every chart field
also carries dtheta/dtau and dt/dtau as its last two components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._core import kinds as _kinds
from ._core import rhs_py as _rhs
from .integrator import KernelField
from .model import DampingParams, ReducedState


class ChartId(str, Enum):
    """Chart identifiers (values are the stable CLI/JSON names).

    GAMMA_POS_A0    gamma > 0, alpha = 0; coords (y, v1, mu1)
    GAMMA_POS_APOS  gamma > 0, alpha > 0; coords (q1, v11, mu11)
    GAMMA_NEG       gamma < 0;            coords (r1, v, x)
    CRITICAL        gamma = 0;            coords (r1, v, rho1)
    CRITICAL_L2     gamma = 0;            coords (v1, mu1, rho2)
    """

    GAMMA_POS_A0 = "gamma-pos-a0"
    GAMMA_POS_APOS = "gamma-pos"
    GAMMA_NEG = "gamma-neg"
    CRITICAL = "critical"
    CRITICAL_L2 = "critical-l2"


_CHART_KIND = {
    ChartId.GAMMA_POS_A0: _kinds.KIND_GAMMA_POS_A0,
    ChartId.GAMMA_POS_APOS: _kinds.KIND_GAMMA_POS_APOS,
    ChartId.GAMMA_NEG: _kinds.KIND_GAMMA_NEG,
    ChartId.CRITICAL: _kinds.KIND_CRITICAL,
    ChartId.CRITICAL_L2: _kinds.KIND_CRITICAL_L2,
}

COORD_NAMES = {
    ChartId.GAMMA_POS_A0: ("y", "v1", "mu1"),
    ChartId.GAMMA_POS_APOS: ("q1", "v11", "mu11"),
    ChartId.GAMMA_NEG: ("r1", "v", "x"),
    ChartId.CRITICAL: ("r1", "v", "rho1"),
    ChartId.CRITICAL_L2: ("v1", "mu1", "rho2"),
}

# Index of the radial-like coordinate (vanishes at collision) per chart.
RADIAL_INDEX = {
    ChartId.GAMMA_POS_A0: 0,
    ChartId.GAMMA_POS_APOS: 0,
    ChartId.GAMMA_NEG: 2,
    ChartId.CRITICAL: 2,
    ChartId.CRITICAL_L2: 2,
}


@dataclass(frozen=True)
class ChartState:
    """Point in one chart, with co-integrated angle and physical time.

    Radial-like and momentum-scale coordinates live on [0, inf); the
    constructor rejects negatives.
    """

    chart: ChartId
    c1: float
    c2: float
    c3: float
    theta: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        names = COORD_NAMES[self.chart]
        coords = (self.c1, self.c2, self.c3)
        for i in _kinds.NONNEG[_CHART_KIND[self.chart]]:
            if coords[i] < 0.0:
                raise ValueError(
                    f"{self.chart.value} needs {names[i]} >= 0, got {coords[i]}"
                )

    def coords(self):
        return (self.c1, self.c2, self.c3)

    def as_vector(self):
        return [self.c1, self.c2, self.c3, self.theta, self.t]


@dataclass(frozen=True)
class HamiltonianValue:
    """Drag-free energy of the (r1, v) slice; equals ecc_sq / 2."""

    h: float


def check_chart_valid(chart: ChartId, params: DampingParams) -> None:
    """Raise unless `chart` is admissible for these parameters."""
    g = params.gamma
    if chart == ChartId.GAMMA_POS_A0:
        ok = g > 0.0 and params.alpha == 0.0
    elif chart == ChartId.GAMMA_POS_APOS:
        ok = g > 0.0 and params.alpha > 0.0
    elif chart == ChartId.GAMMA_NEG:
        ok = g < 0.0
    else:
        ok = g == 0.0
    if not ok:
        raise ValueError(
            f"chart {chart.value} is not valid for (alpha={params.alpha}, "
            f"beta={params.beta}): gamma={g}"
        )


def select_chart(params: DampingParams) -> ChartId:
    """Route parameters to their regime chart."""
    if params.gamma > 0.0:
        return ChartId.GAMMA_POS_A0 if params.alpha == 0.0 else ChartId.GAMMA_POS_APOS
    if params.gamma < 0.0:
        return ChartId.GAMMA_NEG
    return ChartId.CRITICAL


def chart_from_reduced(chart: ChartId, params: DampingParams,
                       s: ReducedState) -> ChartState:
    """Invert the chart's power-law transform at a reduced state (needs l > 0)."""
    check_chart_valid(chart, params)
    r, p, l = s.r, s.p, s.l
    if r <= 0.0:
        raise ValueError("chart transforms need r > 0")
    if l <= 0.0:
        raise ValueError("chart transforms need l > 0")
    g = params.gamma
    gt = params.gamma_tilde
    a = params.alpha
    b = params.beta
    if chart == ChartId.GAMMA_POS_A0:
        c = (r ** (0.5 * g), p * math.sqrt(r), l / math.sqrt(r))
    elif chart == ChartId.GAMMA_POS_APOS:
        q1 = r ** (0.5 * g / (1.0 + a))
        c = (q1, p * q1 ** ((4.0 - 2.0 * b) / g), l * q1 ** (-(1.0 + a + g) / g))
    elif chart == ChartId.GAMMA_NEG:
        c = (r / (l * l), p * l, l**gt)
    elif chart == ChartId.CRITICAL:
        c = (r / (l * l), p * l, l)
    else:  # CRITICAL_L2
        sr = math.sqrt(r)
        c = (p * sr, l / sr, sr)
    return ChartState(chart, c[0], c[1], c[2], s.theta, s.t)


def reduced_from_chart(chart: ChartId, params: DampingParams,
                       c: ChartState) -> ReducedState:
    """Apply the chart's power-law transform; exact inverse of
    :func:`chart_from_reduced` on its domain."""
    check_chart_valid(chart, params)
    radial = c.coords()[RADIAL_INDEX[chart]]
    if radial <= 0.0:
        raise ValueError("chart state has nonpositive radial-like coordinate")
    g = params.gamma
    gt = params.gamma_tilde
    a = params.alpha
    b = params.beta
    c1, c2, c3 = c.coords()
    if chart == ChartId.GAMMA_POS_A0:
        y, v1, mu1 = c1, c2, c3
        r = y ** (2.0 / g)
        p = v1 * y ** (-1.0 / g)
        l = mu1 * y ** (1.0 / g)
    elif chart == ChartId.GAMMA_POS_APOS:
        q1, v11, mu11 = c1, c2, c3
        r = q1 ** (2.0 * (1.0 + a) / g)
        p = v11 * q1 ** ((2.0 * b - 4.0) / g)
        l = mu11 * q1 ** ((1.0 + a + g) / g)
    elif chart == ChartId.GAMMA_NEG:
        r1, v, x = c1, c2, c3
        l = x ** (1.0 / gt)
        r = r1 * x ** (2.0 / gt)
        p = v * x ** (-1.0 / gt)
    elif chart == ChartId.CRITICAL:
        r1, v, rho1 = c1, c2, c3
        l = rho1
        r = r1 * rho1 * rho1
        p = v / rho1
    else:  # CRITICAL_L2
        v1, mu1, rho2 = c1, c2, c3
        r = rho2 * rho2
        p = v1 / rho2
        l = mu1 * rho2
    return ReducedState(r=r, p=p, l=l, theta=c.theta, t=c.t)


def chart_field(chart: ChartId, params: DampingParams) -> KernelField:
    """Kernel field of the chart system in its rescaled clock.

    State layout (c1, c2, c3, theta, t); the last two derivative components
    are dtheta/dtau and dt/dtau.
    """
    check_chart_valid(chart, params)
    return KernelField(_CHART_KIND[chart], params.packed, chart.value)


def chart_rhs(params: DampingParams, c: ChartState) -> np.ndarray:
    """Chart-time derivative of (c1, c2, c3, theta, t)."""
    check_chart_valid(c.chart, params)
    out = _rhs.rhs(_CHART_KIND[c.chart], params.packed, c.as_vector())
    return np.asarray(out, dtype=float)


def hamiltonian(r1: float, v: float) -> HamiltonianValue:
    """Drag-free energy of the rescaled radial slice: v^2/2 + (r1-1)^2/(2 r1^2)."""
    if r1 <= 0.0:
        raise ValueError("r1 must be positive")
    return HamiltonianValue(0.5 * v * v + (r1 - 1.0) ** 2 / (2.0 * r1 * r1))


def ecc_sq_coords(chart: ChartId, params: DampingParams, c1, c2, c3):
    """Squared eccentricity from raw chart coordinates.

    Polynomial/rational in the coordinates, so it stays well defined on the
    collision boundary.  Accepts scalars or numpy arrays.
    """
    if chart == ChartId.GAMMA_POS_A0:
        v1, mu1 = c2, c3
        return 1.0 - 2.0 * mu1 * mu1 * (1.0 - 0.5 * (mu1 * mu1 + v1 * v1))
    if chart == ChartId.GAMMA_POS_APOS:
        q2 = c1 * c1
        v11, mu11 = c2, c3
        return 1.0 - 2.0 * q2 * mu11 * mu11 * (
            1.0 - 0.5 * q2 * (mu11 * mu11 + v11 * v11)
        )
    if chart in (ChartId.GAMMA_NEG, ChartId.CRITICAL):
        r1, v = c1, c2
        return v * v + ((r1 - 1.0) / r1) ** 2
    # CRITICAL_L2
    v1, mu1 = c1, c2
    m2 = mu1 * mu1
    return m2 * v1 * v1 + (1.0 - m2) ** 2


def chart_ecc_sq(params: DampingParams, c: ChartState) -> float:
    """Squared eccentricity of a chart state."""
    return float(ecc_sq_coords(c.chart, params, c.c1, c.c2, c.c3))


def chart_ecc_vector(chart: ChartId, params: DampingParams, state5) -> tuple:
    """Eccentricity vector from a chart state vector (c1, c2, c3, theta, t).

    Uses E = (l^2/r - 1) e^{i theta} - i (p l) e^{i theta} with l^2/r and p*l
    written in chart coordinates, so it is regular at the collision boundary.
    """
    c1, c2, c3, theta = state5[0], state5[1], state5[2], state5[3]
    if chart == ChartId.GAMMA_POS_A0:
        l2r = c3 * c3
        v = c2 * c3
    elif chart == ChartId.GAMMA_POS_APOS:
        l2r = c1 * c1 * c3 * c3
        v = c1 * c1 * c2 * c3
    elif chart in (ChartId.GAMMA_NEG, ChartId.CRITICAL):
        l2r = 1.0 / c1
        v = c2
    else:  # CRITICAL_L2
        l2r = c2 * c2
        v = c2 * c1
    co = math.cos(theta)
    si = math.sin(theta)
    a = l2r - 1.0
    return (a * co + v * si, a * si - v * co)


def chart_subsystem(chart: ChartId, params: DampingParams, ncoords: int):
    """Closure over the first `ncoords` chart coordinates (theta/t frozen).

    The coordinate block never reads theta or t, so this is the autonomous
    core used for equilibrium and Jacobian work.
    """
    kind = _CHART_KIND[chart]
    packed = params.packed

    def f(c):
        y = [float(c[i]) if i < ncoords else 0.0 for i in range(3)] + [0.0, 0.0]
        out = _rhs.rhs(kind, packed, y)
        return np.asarray(out[:ncoords], dtype=float)

    return f
