"""Adaptive embedded Runge-Kutta integration with event location.

The public entry point is :func:`integrate`.  Fields are either arbitrary
callables f(t, y) -> sequence, or :class:`KernelField` descriptors naming one
of the built-in right-hand sides; kernel fields with component-threshold
events run on the selected backend (compiled when available).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Optional, Sequence

import numpy as np

from . import _core
from ._core import kinds as _kinds
from ._core import steploop as _steploop


def backend_name() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return _core.BACKEND_NAME


class Direction(IntEnum):
    """Sign of the event-function crossing that triggers an event."""

    ANY = 0
    UP = 1
    DOWN = -1


class Termination(str, Enum):
    STOP_TIME = "stop-time"
    TERMINAL_EVENT = "terminal-event"
    MAX_STEPS = "max-steps"
    NON_FINITE = "non-finite"
    STEP_UNDERFLOW = "step-underflow"


_STATUS_TO_TERMINATION = {
    _kinds.STATUS_STOP_TIME: Termination.STOP_TIME,
    _kinds.STATUS_TERMINAL_EVENT: Termination.TERMINAL_EVENT,
    _kinds.STATUS_MAX_STEPS: Termination.MAX_STEPS,
    _kinds.STATUS_NON_FINITE: Termination.NON_FINITE,
    _kinds.STATUS_STEP_UNDERFLOW: Termination.STEP_UNDERFLOW,
}


@dataclass(frozen=True)
class KernelField:
    """A built-in right-hand side, usable as a plain callable f(t, y)."""

    kind: int
    params: tuple
    label: str = ""

    @property
    def dim(self) -> int:
        return _kinds.DIM[self.kind]

    @property
    def nonneg(self) -> tuple:
        return _kinds.NONNEG[self.kind]

    def __call__(self, t, y):
        return _core.rhs_eval(self.kind, self.params, y)


@dataclass(frozen=True)
class IntegrationConfig:
    """Tolerances, step limits and sampling for one integration run.

    stop_time is the end of the active clock (physical t for reduced and
    cartesian runs, chart time for chart runs).  sample_stride records every
    n-th accepted step; fixed_step disables error control entirely (order
    measurements only).
    """

    rtol: float = 1e-9
    atol: float = 1e-12
    h_init: Optional[float] = None
    h_max: Optional[float] = None
    max_steps: int = 5_000_000
    stop_time: Optional[float] = None
    t_start: float = 0.0
    sample_stride: int = 1
    fixed_step: Optional[float] = None

    def __post_init__(self):
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ValueError("rtol and atol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be at least 1")


@dataclass(frozen=True)
class EventSpec:
    """Scalar event function with crossing direction and terminal flag.

    `component` marks the common special case g = state[index] - threshold,
    which the compiled backend can evaluate natively.
    """

    name: str
    function: Optional[Callable] = None
    direction: Direction = Direction.ANY
    terminal: bool = False
    component: Optional[tuple] = None  # (state index, threshold)

    @classmethod
    def component_event(cls, name, index, threshold, direction=Direction.ANY,
                        terminal=False):
        return cls(name=name, function=None, direction=Direction(direction),
                   terminal=terminal, component=(int(index), float(threshold)))

    def resolve_function(self) -> Callable:
        if self.function is not None:
            return self.function
        if self.component is None:
            raise ValueError(f"event {self.name!r} has neither function nor component")
        idx, thr = self.component
        return lambda t, y: y[idx] - thr


@dataclass(frozen=True)
class EventHit:
    name: str
    time: float
    state: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution with termination report and located events."""

    times: np.ndarray
    states: np.ndarray
    termination: Termination
    terminal_event: Optional[str]
    events: tuple
    n_steps: int
    n_accepted: int

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def integrate(field, initial_state, config: IntegrationConfig,
              events: Sequence[EventSpec] = ()) -> Trajectory:
    """Integrate `field` from `initial_state` under `config`.

    Never raises on mid-run numerical failure: overflow, step underflow and
    step-budget exhaustion are reported through Trajectory.termination.
    """
    if config.stop_time is None:
        raise ValueError("config.stop_time is required")
    y0 = [float(v) for v in initial_state]
    h0 = float(config.h_init) if config.h_init else 0.0
    hmax = float(config.h_max) if config.h_max else 0.0
    fixed = float(config.fixed_step) if config.fixed_step else 0.0
    events = list(events)

    fast_ok = (
        isinstance(field, KernelField)
        and all(e.component is not None for e in events)
        and len(events) <= _kinds.MAX_EVENTS
    )
    if fast_ok:
        raw = _core.integrate_kernel(
            field.kind,
            tuple(field.params),
            y0,
            float(config.t_start),
            float(config.stop_time),
            config.rtol,
            config.atol,
            h0,
            hmax,
            config.max_steps,
            config.sample_stride,
            fixed,
            [(e.component[0], e.component[1], int(e.direction), e.terminal)
             for e in events],
        )
    else:
        nonneg = field.nonneg if isinstance(field, KernelField) else ()
        raw = _steploop.integrate_callable(
            field,
            y0,
            float(config.t_start),
            float(config.stop_time),
            config.rtol,
            config.atol,
            h0,
            hmax,
            config.max_steps,
            config.sample_stride,
            fixed,
            nonneg,
            [(e.resolve_function(), int(e.direction), e.terminal) for e in events],
        )

    times = np.asarray(raw[0], dtype=float)
    states = np.asarray(raw[1], dtype=float)
    if states.ndim == 1:
        states = states.reshape(len(times), -1)
    status, n_steps, n_accepted, ev_records, term_idx = raw[2], raw[3], raw[4], raw[5], raw[6]
    hits = tuple(
        EventHit(events[j].name, float(te), np.asarray(ye, dtype=float))
        for (j, te, ye) in ev_records
    )
    return Trajectory(
        times=times,
        states=states,
        termination=_STATUS_TO_TERMINATION[status],
        terminal_event=events[term_idx].name if term_idx is not None else None,
        events=hits,
        n_steps=int(n_steps),
        n_accepted=int(n_accepted),
    )


def convergence_order(field, initial_state, exact, t_end, steps=(200, 400)) -> float:
    """Observed order from endpoint errors of two fixed-step runs.

    `exact` maps t_end to the true state.  Smooth non-stiff fields should
    come out near 5.
    """
    errs = []
    hs = []
    ref = np.asarray(exact(t_end), dtype=float)
    for n in steps:
        h = t_end / n
        cfg = IntegrationConfig(stop_time=t_end, fixed_step=h, max_steps=10 * n + 16)
        traj = integrate(field, initial_state, cfg)
        if traj.termination != Termination.STOP_TIME:
            raise RuntimeError(f"fixed-step run failed: {traj.termination}")
        errs.append(float(np.linalg.norm(traj.final_state - ref)))
        hs.append(h)
    if errs[1] == 0.0:
        return math.inf
    return math.log(errs[0] / errs[1]) / math.log(hs[0] / hs[1])
