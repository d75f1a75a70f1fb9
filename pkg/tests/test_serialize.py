"""CSV emission: headers, column order, bit-exact float round-trips."""

import io

import numpy as np

from circkep import IntegrationConfig, integrate, make_params
from circkep.charts import ChartId, chart_field
from circkep.model import reduced_field
from circkep.serialize import (
    chart_trajectory_csv_lines,
    reduced_trajectory_csv_lines,
    write_lines,
)


def _parse(text):
    rows = [line.split(",") for line in text.strip().split("\n")]
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def test_reduced_csv_round_trips_exactly():
    params = make_params(1, 1, 0.3)
    traj = integrate(reduced_field(params), [1, 0, 0.9, 0, 0],
                     IntegrationConfig(stop_time=1.0))
    buf = io.StringIO()
    write_lines(buf, reduced_trajectory_csv_lines(traj, params))
    header, data = _parse(buf.getvalue())
    assert header == ["t", "r", "p", "l", "theta", "ecc_sq", "energy"]
    assert np.array_equal(data[:, 0], traj.times)
    assert np.array_equal(data[:, 1:5], traj.states[:, :4])


def test_chart_csv_round_trips_exactly():
    params = make_params(1, 0, 0.1)
    traj = integrate(chart_field(ChartId.GAMMA_NEG, params),
                     [1.3, 0.1, 0.7, 0.0, 0.0],
                     IntegrationConfig(stop_time=50.0))
    buf = io.StringIO()
    write_lines(buf, chart_trajectory_csv_lines(traj, ChartId.GAMMA_NEG, params))
    header, data = _parse(buf.getvalue())
    assert header == ["tau", "t", "theta", "c1", "c2", "c3", "ecc_sq"]
    assert np.array_equal(data[:, 0], traj.times)
    assert np.array_equal(data[:, 3:6], traj.states[:, :3])
    assert np.array_equal(data[:, 1], traj.states[:, 4])
    assert np.array_equal(data[:, 2], traj.states[:, 3])


def test_ecc_column_matches_scalar_form():
    from circkep.model import reduced_ecc_sq

    params = make_params(1, 1, 0.3)
    traj = integrate(reduced_field(params), [1, 0, 0.9, 0, 0],
                     IntegrationConfig(stop_time=1.0))
    buf = io.StringIO()
    write_lines(buf, reduced_trajectory_csv_lines(traj, params))
    _, data = _parse(buf.getvalue())
    want = reduced_ecc_sq(traj.states[:, 0], traj.states[:, 1], traj.states[:, 2])
    assert np.allclose(data[:, 5], want, rtol=0, atol=0)
