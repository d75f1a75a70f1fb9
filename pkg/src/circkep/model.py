"""Drag-law parameters, physical states and conserved/diagnostic observables.

Planar Kepler motion in normalized units (gravitational parameter 1) with a
velocity-opposed drag of magnitude delta*|udot|^(alpha+1)/|u|^beta.  The sign
convention is counterclockwise: the scalar angular momentum l is nonnegative
and theta increases along orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._core import kinds as _kinds
from ._core import rhs_py as _rhs
from .integrator import KernelField


@dataclass(frozen=True)
class DampingParams:
    """Drag-law parameters with the derived regime discriminant.

    gamma = alpha + 2*beta - 3 selects the asymptotic regime; gamma_tilde is
    its negation (meaningful when gamma < 0).  The pair (alpha, beta) = (0, 0)
    is rejected: that drag law behaves differently and is out of scope.
    """

    alpha: float
    beta: float
    delta: float
    gamma: float = field(init=False)
    gamma_tilde: float = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        b = float(self.beta)
        d = float(self.delta)
        if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(d)):
            raise ValueError("drag parameters must be finite")
        if a < 0.0:
            raise ValueError(f"alpha must be nonnegative, got {a}")
        if b < 0.0:
            raise ValueError(f"beta must be nonnegative, got {b}")
        if d <= 0.0:
            raise ValueError(f"delta must be positive, got {d}")
        if a == 0.0 and b == 0.0:
            raise ValueError(
                "(alpha, beta) = (0, 0) is excluded: the linear-drag case "
                "needs alpha + beta > 0"
            )
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "gamma", a + 2.0 * b - 3.0)
        object.__setattr__(self, "gamma_tilde", -(a + 2.0 * b - 3.0))

    @property
    def packed(self) -> tuple:
        """Parameter vector handed to the integration kernels."""
        return (self.alpha, self.beta, self.delta, self.gamma, self.gamma_tilde)


def make_params(alpha, beta, delta) -> DampingParams:
    """Validated constructor for :class:`DampingParams`."""
    return DampingParams(alpha, beta, delta)


@dataclass(frozen=True)
class CartesianState:
    """Planar position/velocity pair; |u| must be positive."""

    u: tuple
    udot: tuple
    t: float = 0.0

    def __post_init__(self):
        u = (float(self.u[0]), float(self.u[1]))
        v = (float(self.udot[0]), float(self.udot[1]))
        if u[0] * u[0] + u[1] * u[1] <= 0.0:
            raise ValueError("|u| must be positive")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "udot", v)

    def as_vector(self):
        return [self.u[0], self.u[1], self.udot[0], self.udot[1]]


@dataclass(frozen=True)
class ReducedState:
    """Rotation-reduced phase point (r, p, l) plus co-integrated theta and t."""

    r: float
    p: float
    l: float
    theta: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.l < 0.0:
            raise ValueError(f"l must be nonnegative, got {self.l}")
        for name in ("r", "p", "l", "theta", "t"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_vector(self):
        return [self.r, self.p, self.l, self.theta, self.t]


@dataclass(frozen=True)
class Observables:
    """Eccentricity vector/scalar, energy and angular momentum of one state."""

    ecc_vector: tuple
    ecc_sq: float
    energy: float
    ang_momentum: float


def damping_magnitude(params: DampingParams, state: CartesianState) -> float:
    """Drag magnitude delta*|udot|^(alpha+1)/|u|^beta (zero at udot = 0)."""
    ux, uy = state.u
    vx, vy = state.udot
    r = math.hypot(ux, uy)
    speed2 = vx * vx + vy * vy
    return params.delta * speed2 ** (0.5 * (params.alpha + 1.0)) * r ** (-params.beta)


def cartesian_rhs(params: DampingParams, state: CartesianState) -> np.ndarray:
    """Time derivative (du, dudot) as a flat 4-vector.

    The drag is evaluated as delta*|u|^(-beta)*|udot|^alpha * udot, which is
    continuous at udot = 0 for alpha > 0 and linear in udot for alpha = 0.
    """
    out = _rhs.rhs(_kinds.KIND_CARTESIAN, params.packed, state.as_vector())
    return np.asarray(out, dtype=float)


def reduced_rhs(params: DampingParams, state: ReducedState) -> np.ndarray:
    """Time derivative (dr, dp, dl, dtheta, dt=1) of the reduced system."""
    out = _rhs.rhs(_kinds.KIND_REDUCED, params.packed, state.as_vector())
    return np.asarray(out, dtype=float)


def reduced_from_cartesian(state: CartesianState) -> ReducedState:
    """Reduce to (r, p, l, theta); l is |u ^ udot| so clockwise states map to
    their counterclockwise mirror (the map is a section, not an inverse)."""
    ux, uy = state.u
    vx, vy = state.udot
    r = math.hypot(ux, uy)
    return ReducedState(
        r=r,
        p=(ux * vx + uy * vy) / r,
        l=abs(ux * vy - uy * vx),
        theta=math.atan2(uy, ux),
        t=state.t,
    )


def cartesian_from_reduced(state: ReducedState) -> CartesianState:
    """Embed with counterclockwise convention: udot = (p + i l/r) e^{i theta}."""
    c = math.cos(state.theta)
    s = math.sin(state.theta)
    lr = state.l / state.r
    return CartesianState(
        u=(state.r * c, state.r * s),
        udot=(state.p * c - lr * s, state.p * s + lr * c),
        t=state.t,
    )


def eccentricity_vector(state: CartesianState) -> tuple:
    """In-plane eccentricity vector udot ^ L - u/|u| (signed L)."""
    ux, uy = state.u
    vx, vy = state.udot
    r = math.hypot(ux, uy)
    L = ux * vy - uy * vx
    return (L * vy - ux / r, -L * vx - uy / r)


def observables(params: DampingParams, state: CartesianState) -> Observables:
    """Eccentricity vector/scalar, Kepler energy and |angular momentum|."""
    ux, uy = state.u
    vx, vy = state.udot
    r = math.hypot(ux, uy)
    ex, ey = eccentricity_vector(state)
    return Observables(
        ecc_vector=(ex, ey),
        ecc_sq=ex * ex + ey * ey,
        energy=0.5 * (vx * vx + vy * vy) - 1.0 / r,
        ang_momentum=abs(ux * vy - uy * vx),
    )


def reduced_ecc_sq(r, p, l):
    """Squared eccentricity l^2 p^2 + (l^2 - r)^2 / r^2 from reduced data.

    Accepts scalars or numpy arrays.
    """
    return (l * p) ** 2 + (l * l - r) ** 2 / (r * r)


def reduced_energy(r, p, l):
    """Kepler energy from reduced data; scalars or numpy arrays."""
    return 0.5 * (p * p + (l / r) ** 2) - 1.0 / r


def reduced_field(params: DampingParams) -> KernelField:
    """Kernel field for the reduced system, state (r, p, l, theta, t)."""
    return KernelField(_kinds.KIND_REDUCED, params.packed, "reduced")


def cartesian_field(params: DampingParams) -> KernelField:
    """Kernel field for the Cartesian system, state (ux, uy, vx, vy)."""
    return KernelField(_kinds.KIND_CARTESIAN, params.packed, "cartesian")


_UNDAMPED = (0.0, 0.0, 0.0, -3.0, 3.0)  # delta = 0: pure Kepler flow


def undamped_cartesian_field() -> KernelField:
    """Drag-free Kepler field (reference for conservation checks)."""
    return KernelField(_kinds.KIND_CARTESIAN, _UNDAMPED, "cartesian-undamped")


def undamped_reduced_field() -> KernelField:
    """Drag-free reduced field."""
    return KernelField(_kinds.KIND_REDUCED, _UNDAMPED, "reduced-undamped")


def undamped_cartesian_rhs(state: CartesianState) -> np.ndarray:
    """Time derivative of the drag-free Kepler flow."""
    out = _rhs.rhs(_kinds.KIND_CARTESIAN, _UNDAMPED, state.as_vector())
    return np.asarray(out, dtype=float)
