"""Equilibrium reports, Jacobians and the small-matrix eigensolver."""

import math

import numpy as np
import pytest

from circkep import (
    ChartId,
    Stability,
    critical_boundary_equilibrium,
    critical_interior_equilibrium,
    critical_jacobian,
    eigenvalues_small,
    gamma_pos_equilibrium,
    make_params,
    numeric_jacobian,
    regime_equilibria,
    zero_hopf_report,
)
from circkep.charts import chart_subsystem


class TestNumericJacobian:
    def test_recovers_linear_field(self):
        A = np.array([[1.0, 2.0], [3.0, -4.0]])
        J = numeric_jacobian(lambda x: A @ x, (0.3, -0.7))
        assert np.max(np.abs(J - A)) < 1e-9

    def test_rotation_at_center(self):
        # boundary (r1, v) flow linearized at its center
        f = chart_subsystem(ChartId.GAMMA_NEG, make_params(1, 0, 0.1), 2)
        J = numeric_jacobian(f, (1.0, 0.0))
        assert np.allclose(J, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-6)

    def test_critical_interior_determinant(self):
        p = make_params(1, 1, 0.2)
        rep = critical_interior_equilibrium(p)
        f = chart_subsystem(ChartId.CRITICAL, p, 2)
        J = numeric_jacobian(f, rep.location)
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        assert J[0, 0] + J[1, 1] < 0.0
        assert det == pytest.approx(0.49787136, abs=1e-6)


class TestEigenvaluesSmall:
    def test_rotation(self):
        assert eigenvalues_small([[0, 1], [-1, 0]]) == (1j, -1j)

    def test_diagonal(self):
        eigs = eigenvalues_small(np.diag([0.0, -2.0, -4.0]))
        assert [z.real for z in eigs] == pytest.approx([-4, -2, 0], abs=1e-12)
        assert all(z.imag == 0 for z in eigs)

    def test_cube_roots_of_unity(self):
        companion = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]  # lambda^3 = 1
        eigs = eigenvalues_small(companion)
        want = [
            complex(-0.5, math.sqrt(3) / 2),
            complex(-0.5, -math.sqrt(3) / 2),
            complex(1.0, 0.0),
        ]
        for a, b in zip(eigs, want):
            assert abs(a - b) < 1e-12

    @pytest.mark.parametrize("n", [2, 3])
    def test_against_numpy(self, n):
        rng = np.random.default_rng(43)
        for _ in range(200):
            A = rng.uniform(-2, 2, size=(n, n))
            ours = sorted(eigenvalues_small(A), key=lambda z: (z.real, z.imag))
            ref = sorted(np.linalg.eigvals(A), key=lambda z: (z.real, z.imag))
            scale = max(1.0, max(abs(z) for z in ref))
            for a, b in zip(ours, ref):
                assert abs(a - b) < 1e-8 * scale


class TestGammaPos:
    def test_alpha_one_delta_four(self):
        rep = gamma_pos_equilibrium(make_params(1, 2, 4.0))
        assert rep.location == pytest.approx((0.0, -0.5, 0.0))
        got = sorted(z.real for z in rep.eigenvalues)
        assert got == pytest.approx([-4.0, -2.0, 0.0], abs=1e-12)

    def test_alpha_zero(self):
        rep = gamma_pos_equilibrium(make_params(0, 2, 0.3))
        assert rep.location == (0.0, 0.0, 0.0)
        got = sorted(z.real for z in rep.eigenvalues)
        assert got == pytest.approx([-0.3, -0.3, 0.0], abs=1e-12)

    def test_field_norm(self):
        assert gamma_pos_equilibrium(make_params(1, 2, 4.0)).extras["field_norm"] < 1e-12

    def test_closed_vs_numeric_grid(self):
        # construction raises if the two spectra differ beyond 1e-8
        for alpha in (0.5, 1.0, 2.0):
            for delta in (0.25, 1.0, 4.0):
                gamma_pos_equilibrium(make_params(alpha, 2.0, delta))

    def test_rejects_wrong_regime(self):
        with pytest.raises(ValueError):
            gamma_pos_equilibrium(make_params(0, 1, 0.1))


class TestZeroHopf:
    def test_spectrum_and_decay(self):
        rep = zero_hopf_report(make_params(0, 1, 0.1))
        assert rep.location == (1.0, 0.0, 0.0)
        assert rep.eigenvalues == (1j, 0j, -1j)
        assert rep.extras["decay_a"] == pytest.approx(-1.0)  # -(0+1)/1
        assert rep.stability == Stability.ZERO_HOPF

    def test_decay_values(self):
        assert zero_hopf_report(make_params(1, 0, 0.1)).extras["decay_a"] == -0.5
        assert zero_hopf_report(make_params(1, 0.5, 0.2)).extras["decay_a"] == -1.5

    def test_field_norm(self):
        assert zero_hopf_report(make_params(1, 0.5, 0.2)).extras["field_norm"] < 1e-12

    def test_rejects_wrong_regime(self):
        with pytest.raises(ValueError):
            zero_hopf_report(make_params(1, 1, 0.3))


class TestCriticalInterior:
    def test_location_and_ecc(self):
        rep = critical_interior_equilibrium(make_params(1, 1, 0.3))
        assert rep.location == pytest.approx((1.5625, -0.48), rel=1e-14)
        assert rep.extras["ecc_sq"] == pytest.approx(0.36, abs=1e-12)
        assert rep.stability == Stability.HYPERBOLIC_SINK

    @pytest.mark.parametrize("delta", [0.05, 0.2, 0.3, 0.45])
    def test_ecc_identity_at_location(self, delta):
        # v^2 + ((r1-1)/r1)^2 evaluated at the location equals 4 delta^2
        rep = critical_interior_equilibrium(make_params(1, 1, delta))
        r1, v = rep.location
        ecc = v * v + ((r1 - 1.0) / r1) ** 2
        assert ecc == pytest.approx(4.0 * delta * delta, abs=1e-12)

    def test_det_closed_form(self):
        rep = critical_interior_equilibrium(make_params(1, 1, 0.2))
        assert rep.extras["det_j"] == pytest.approx(0.49787136, abs=1e-10)

    @pytest.mark.parametrize("delta", [0.5, 0.6])
    def test_absent_above_half(self, delta):
        rep = critical_interior_equilibrium(make_params(1, 1, delta))
        assert not rep.exists

    def test_analytic_jacobian_matches_numeric(self):
        p = make_params(1, 1, 0.3)
        f = chart_subsystem(ChartId.CRITICAL, p, 2)
        for r1, v in [(1.3, -0.4), (0.8, 0.5), (2.0, -0.1)]:
            J_num = numeric_jacobian(f, (r1, v))
            J_an = critical_jacobian(p, r1, v)
            assert np.max(np.abs(J_num - J_an)) < 1e-6


class TestCriticalBoundary:
    def test_alpha0_delta1(self):
        rep = critical_boundary_equilibrium(make_params(0, 1.5, 1.0))
        assert rep.location[0] == pytest.approx(1.0 - math.sqrt(3.0), abs=1e-12)
        assert abs(rep.extras["residual"]) < 1e-12
        assert rep.stability == Stability.HYPERBOLIC_SINK

    def test_alpha0_delta_half(self):
        rep = critical_boundary_equilibrium(make_params(0, 1.5, 0.5))
        assert rep.location[0] == pytest.approx(-1.0, abs=1e-12)
        assert rep.stability == Stability.CENTER_DEGENERATE

    def test_saddle_below_half(self):
        rep = critical_boundary_equilibrium(make_params(1, 1, 0.3))
        assert rep.stability == Stability.SADDLE
        eigs = sorted(z.real for z in rep.eigenvalues)
        assert eigs[0] < 0.0 < eigs[1]

    @pytest.mark.parametrize("alpha,delta", [(0.0, 0.2), (1.0, 0.7), (2.5, 1.3)])
    def test_residual_small(self, alpha, delta):
        beta = (3.0 - alpha) / 2.0
        rep = critical_boundary_equilibrium(make_params(alpha, beta, delta))
        assert abs(rep.extras["residual"]) < 1e-12
        assert rep.location[0] < 0.0


class TestReportPlumbing:
    def test_regime_equilibria_dispatch(self):
        assert len(regime_equilibria(make_params(1, 2, 0.5))) == 1
        assert len(regime_equilibria(make_params(0, 1, 0.1))) == 1
        assert len(regime_equilibria(make_params(1, 1, 0.3))) == 2

    def test_json_round_trip(self):
        import json

        rep = zero_hopf_report(make_params(1, 0, 0.1))
        d = json.loads(json.dumps(rep.to_json_dict()))
        assert d["chart"] == "gamma-neg"
        assert d["stability"] == "zero-hopf"
        assert d["eigenvalues"][0] == {"re": 0.0, "im": 1.0}
        assert d["extras"]["decay_a"] == -0.5


class TestAbsentEquilibriumJson:
    def test_shape_when_missing(self):
        import json

        rep = critical_interior_equilibrium(make_params(1, 1, 0.8))
        doc = json.loads(json.dumps(rep.to_json_dict()))
        assert doc["exists"] is False
        assert doc["location"] == []
        assert doc["eigenvalues"] == []
        assert doc["stability"] is None
