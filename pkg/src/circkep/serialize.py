"""Plot-ready CSV emission for trajectories.

Chart runs:   tau,t,theta,c1,c2,c3,ecc_sq
Reduced runs: t,r,p,l,theta,ecc_sq,energy

Floats are written with 17 significant digits so every value round-trips
bit-exactly; the decimal separator is always '.'.
"""

from __future__ import annotations

import numpy as np

from .charts import ChartId, ecc_sq_coords
from .integrator import Trajectory
from .model import DampingParams, reduced_ecc_sq, reduced_energy

CHART_HEADER = "tau,t,theta,c1,c2,c3,ecc_sq"
REDUCED_HEADER = "t,r,p,l,theta,ecc_sq,energy"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def chart_trajectory_csv_lines(traj: Trajectory, chart: ChartId,
                               params: DampingParams):
    yield CHART_HEADER
    Y = traj.states
    ecc = np.asarray(
        ecc_sq_coords(chart, params, Y[:, 0], Y[:, 1], Y[:, 2]), dtype=float
    )
    for i in range(len(traj.times)):
        row = (traj.times[i], Y[i, 4], Y[i, 3], Y[i, 0], Y[i, 1], Y[i, 2], ecc[i])
        yield ",".join(_fmt(v) for v in row)


def reduced_trajectory_csv_lines(traj: Trajectory, params: DampingParams):
    yield REDUCED_HEADER
    Y = traj.states
    ecc = reduced_ecc_sq(Y[:, 0], Y[:, 1], Y[:, 2])
    energy = reduced_energy(Y[:, 0], Y[:, 1], Y[:, 2])
    for i in range(len(traj.times)):
        row = (traj.times[i], Y[i, 0], Y[i, 1], Y[i, 2], Y[i, 3], ecc[i], energy[i])
        yield ",".join(_fmt(v) for v in row)


def write_lines(fobj, lines) -> None:
    for line in lines:
        fobj.write(line + "\n")
