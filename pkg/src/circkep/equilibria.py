"""Equilibrium location, Jacobians, eigenvalues and stability per chart.

Closed forms are cross-checked against numeric Jacobians at construction
time, so a report is only ever produced when both routes agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .charts import ChartId, chart_subsystem
from .model import DampingParams


class Stability(str, Enum):
    HYPERBOLIC_SINK = "hyperbolic-sink"
    SADDLE = "saddle"
    ZERO_HOPF = "zero-hopf"
    CENTER_DEGENERATE = "center-degenerate"


@dataclass(frozen=True)
class EquilibriumReport:
    """Location, spectrum and stability of one chart equilibrium."""

    chart: Optional[ChartId]
    location: tuple
    eigenvalues: tuple
    stability: Optional[Stability]
    exists: bool
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "chart": self.chart.value if self.chart else None,
            "location": list(self.location),
            "eigenvalues": [{"re": z.real, "im": z.imag} for z in self.eigenvalues],
            "stability": self.stability.value if self.stability else None,
            "exists": self.exists,
            "extras": dict(self.extras),
        }


def numeric_jacobian(f, point, scale: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian with step h_i = max(scale, scale*|x_i|)."""
    x = np.asarray(point, dtype=float)
    n = x.size
    f0 = np.asarray(f(x), dtype=float)
    m = f0.size
    J = np.empty((m, n))
    for i in range(n):
        h = max(scale, scale * abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        col = (np.asarray(f(xp), dtype=float) - np.asarray(f(xm), dtype=float)) / (2.0 * h)
        if not np.all(np.isfinite(col)):
            raise ValueError(f"non-finite derivative in column {i}")
        J[:, i] = col
    return J


def _sort_eigs(vals):
    # ascending real part; within a conjugate pair, positive imaginary first
    return tuple(sorted(vals, key=lambda z: (z.real, -z.imag)))


def eigenvalues_small(matrix) -> tuple:
    """Eigenvalues of a real 2x2 or 3x3 matrix by closed-form root formulas.

    Quadratic formula for 2x2; Cardano (trigonometric branch when all roots
    are real) for 3x3.  Deterministic ordering: ascending real part, positive
    imaginary part first within a pair.
    """
    A = np.asarray(matrix, dtype=float)
    if A.shape == (2, 2):
        tr = A[0, 0] + A[1, 1]
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        disc = tr * tr - 4.0 * det
        if disc >= 0.0:
            s = math.sqrt(disc)
            return _sort_eigs([complex(0.5 * (tr - s)), complex(0.5 * (tr + s))])
        s = math.sqrt(-disc)
        return _sort_eigs([complex(0.5 * tr, 0.5 * s), complex(0.5 * tr, -0.5 * s)])
    if A.shape != (3, 3):
        raise ValueError("eigenvalues_small handles 2x2 and 3x3 matrices only")

    # characteristic polynomial lambda^3 - tr*lambda^2 + m2*lambda - det
    tr = A[0, 0] + A[1, 1] + A[2, 2]
    m2 = (
        A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
        + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    )
    det = (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )
    # depressed cubic mu^3 + p*mu + q with lambda = mu + tr/3
    shift = tr / 3.0
    p = m2 - tr * tr / 3.0
    q = -det + tr * m2 / 3.0 - 2.0 * tr**3 / 27.0
    disc = -4.0 * p**3 - 27.0 * q * q
    if disc >= 0.0:
        # three real roots, trigonometric branch
        if p >= 0.0:
            # disc >= 0 forces p <= 0; equality only at a (near-)triple root
            root = complex(shift)
            return _sort_eigs([root, root, root])
        rad = math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p * rad)
        arg = max(-1.0, min(1.0, arg))
        phi = math.acos(arg)
        roots = [
            complex(2.0 * rad * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift)
            for k in range(3)
        ]
        return _sort_eigs(roots)
    # one real root plus a conjugate pair (Cardano, real arithmetic only;
    # pick the cube-root branch that avoids cancellation in -q/2 +/- s)
    s = math.sqrt(q * q / 4.0 + p**3 / 27.0)
    u3 = -q / 2.0 - s if q > 0.0 else -q / 2.0 + s
    u = math.copysign(abs(u3) ** (1.0 / 3.0), u3)
    v = -p / (3.0 * u)
    real_root = u + v
    im = math.sqrt(3.0) / 2.0 * abs(u - v)
    re_pair = -0.5 * (u + v) + shift
    return _sort_eigs(
        [complex(real_root + shift), complex(re_pair, im), complex(re_pair, -im)]
    )


def _check_spectrum(closed, numeric, tol):
    for a, b in zip(_sort_eigs(closed), _sort_eigs(numeric)):
        if abs(a - b) > tol * max(1.0, abs(a)):
            raise RuntimeError(
                f"closed-form spectrum {closed} disagrees with numeric {numeric}"
            )


def _field_norm_check(f, loc, tol=1e-10):
    norm = float(np.linalg.norm(f(np.asarray(loc, dtype=float))))
    if norm >= tol:
        raise RuntimeError(f"field norm {norm} at reported equilibrium {loc}")
    return norm


def gamma_pos_equilibrium(params: DampingParams) -> EquilibriumReport:
    """Collision attractor for gamma > 0 (both alpha = 0 and alpha > 0 charts).

    alpha > 0: (q1, v11, mu11) = (0, -delta^(-1/(1+alpha)), 0) with spectrum
    {0, -delta^(1/(1+alpha)), -(1+alpha) delta^(1/(1+alpha))}; alpha = 0:
    the origin with spectrum {0, -delta, -delta}.
    """
    if params.gamma <= 0.0:
        raise ValueError("gamma_pos_equilibrium needs gamma > 0")
    d = params.delta
    a = params.alpha
    if a > 0.0:
        chart = ChartId.GAMMA_POS_APOS
        rate = d ** (1.0 / (1.0 + a))
        loc = (0.0, -(d ** (-1.0 / (1.0 + a))), 0.0)
        closed = [complex(0.0), complex(-rate), complex(-(1.0 + a) * rate)]
    else:
        chart = ChartId.GAMMA_POS_A0
        loc = (0.0, 0.0, 0.0)
        closed = [complex(0.0), complex(-d), complex(-d)]
    f = chart_subsystem(chart, params, 3)
    numeric = eigenvalues_small(numeric_jacobian(f, loc))
    _check_spectrum(closed, numeric, 1e-8)
    norm = _field_norm_check(f, loc)
    return EquilibriumReport(
        chart=chart,
        location=loc,
        eigenvalues=_sort_eigs(closed),
        stability=Stability.CENTER_DEGENERATE,
        exists=True,
        extras={"field_norm": norm, "v_limit": loc[1]},
    )


def zero_hopf_report(params: DampingParams) -> EquilibriumReport:
    """The circularization point (r1, v, x) = (1, 0, 0) for gamma < 0.

    Spectrum {+i, -i, 0}; the report carries the power-law decay exponent
    a = -(alpha+beta)/gamma_tilde of the reduced slow flow.
    """
    if params.gamma >= 0.0:
        raise ValueError("zero_hopf_report needs gamma < 0")
    loc = (1.0, 0.0, 0.0)
    closed = [complex(0.0, 1.0), complex(0.0, -1.0), complex(0.0)]
    f = chart_subsystem(ChartId.GAMMA_NEG, params, 3)
    numeric = eigenvalues_small(numeric_jacobian(f, loc))
    _check_spectrum(closed, numeric, 1e-8)
    norm = _field_norm_check(f, loc)
    decay = -(params.alpha + params.beta) / params.gamma_tilde
    return EquilibriumReport(
        chart=ChartId.GAMMA_NEG,
        location=loc,
        eigenvalues=_sort_eigs(closed),
        stability=Stability.ZERO_HOPF,
        exists=True,
        extras={"field_norm": norm, "decay_a": decay},
    )


def critical_jacobian(params: DampingParams, r1: float, v: float) -> np.ndarray:
    """Analytic Jacobian of the critical planar (r1, v) field."""
    a = params.alpha
    m = a + params.beta
    d = params.delta
    w = 1.0 + r1 * r1 * v * v
    G = w ** (0.5 * a)
    dG_dr1 = a * r1 * v * v * w ** (0.5 * a - 1.0)
    dG_dv = a * r1 * r1 * v * w ** (0.5 * a - 1.0)
    rm = r1 ** (-m)
    j11 = 2.0 * d * ((1.0 - m) * rm * G + r1 * rm * dG_dr1)
    j12 = 1.0 + 2.0 * d * r1 * rm * dG_dv
    j21 = -(3.0 - 2.0 * r1) / r1**4 - 2.0 * d * v * (-m * rm / r1 * G + rm * dG_dr1)
    j22 = -2.0 * d * rm * (G + v * dG_dv)
    return np.array([[j11, j12], [j21, j22]])


def critical_interior_equilibrium(params: DampingParams) -> EquilibriumReport:
    """Interior attractor of the critical planar system; exists iff delta < 1/2.

    Location (r1, v) = (1/(1-4 delta^2), -2 delta sqrt(1-4 delta^2)); the
    squared eccentricity there is exactly 4 delta^2 and det J has the closed
    form (2 delta + 1)^4 (1 - 2 delta)^4.
    """
    if params.gamma != 0.0:
        raise ValueError("critical_interior_equilibrium needs gamma == 0")
    d = params.delta
    if d >= 0.5:
        return EquilibriumReport(
            chart=ChartId.CRITICAL, location=(), eigenvalues=(),
            stability=None, exists=False, extras={},
        )
    s = 1.0 - 4.0 * d * d
    loc = (1.0 / s, -2.0 * d * math.sqrt(s))
    J = critical_jacobian(params, loc[0], loc[1])
    det = float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
    det_closed = (2.0 * d + 1.0) ** 4 * (1.0 - 2.0 * d) ** 4
    if abs(det - det_closed) >= 1e-10:
        raise RuntimeError(f"det J {det} vs closed form {det_closed}")
    trace = float(J[0, 0] + J[1, 1])
    if trace >= 0.0:
        raise RuntimeError(f"expected negative trace, got {trace}")
    f = chart_subsystem(ChartId.CRITICAL, params, 2)
    norm = _field_norm_check(f, loc)
    eigs = eigenvalues_small(J)
    return EquilibriumReport(
        chart=ChartId.CRITICAL,
        location=loc,
        eigenvalues=eigs,
        stability=Stability.HYPERBOLIC_SINK,
        exists=True,
        extras={
            "field_norm": norm,
            "det_j": det,
            "trace_j": trace,
            "ecc_sq": 4.0 * d * d,
        },
    )


def _boundary_residual(params: DampingParams, v1: float) -> float:
    # root equation of the collision-boundary equilibrium: v1^2/2 = 1 + d|v1|^a v1
    return 0.5 * v1 * v1 - 1.0 - params.delta * abs(v1) ** params.alpha * v1


def critical_boundary_equilibrium(params: DampingParams) -> EquilibriumReport:
    """Boundary equilibrium (v1*, 0) of the second critical chart.

    v1* < 0 is the unique negative root of v1^2/2 = 1 + delta |v1|^alpha v1,
    found by bisection to 1e-12.  Attracting iff delta >= 1/2 (degenerate at
    equality), a saddle below.
    """
    if params.gamma != 0.0:
        raise ValueError("critical_boundary_equilibrium needs gamma == 0")
    lo, hi = -2.0, -1e-9
    f_lo = _boundary_residual(params, lo)
    f_hi = _boundary_residual(params, hi)
    # the residual is +1 + delta*2^(alpha+1) at -2, but expand defensively
    expansions = 0
    while f_lo * f_hi > 0.0 and expansions < 60:
        lo *= 2.0
        f_lo = _boundary_residual(params, lo)
        expansions += 1
    if f_lo * f_hi > 0.0:
        raise RuntimeError("bisection bracket for v1* did not change sign")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _boundary_residual(params, mid)
        if f_lo * f_mid <= 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo < 1e-13:
            break
    v1 = 0.5 * (lo + hi)
    residual = _boundary_residual(params, v1)
    f = chart_subsystem(ChartId.CRITICAL_L2, params, 2)
    norm = _field_norm_check(f, (v1, 0.0))
    w = abs(v1)
    lam1 = v1 - params.delta * (params.alpha + 1.0) * w ** params.alpha
    lam2 = (w * w - 1.0) / w
    d = params.delta
    if d > 0.5:
        stab = Stability.HYPERBOLIC_SINK
    elif d == 0.5:
        stab = Stability.CENTER_DEGENERATE
    else:
        stab = Stability.SADDLE
    return EquilibriumReport(
        chart=ChartId.CRITICAL_L2,
        location=(v1, 0.0),
        eigenvalues=_sort_eigs([complex(lam1), complex(lam2)]),
        stability=stab,
        exists=True,
        extras={"residual": residual, "field_norm": norm},
    )


def regime_equilibria(params: DampingParams) -> list:
    """All equilibrium reports relevant to these parameters."""
    if params.gamma > 0.0:
        return [gamma_pos_equilibrium(params)]
    if params.gamma < 0.0:
        return [zero_hopf_report(params)]
    return [critical_interior_equilibrium(params), critical_boundary_equilibrium(params)]
