"""Rescaling charts: transforms, fields, eccentricity, structure checks."""

import math

import numpy as np
import pytest

from circkep import (
    ChartId,
    ChartState,
    IntegrationConfig,
    ReducedState,
    chart_ecc_sq,
    chart_ecc_vector,
    chart_field,
    chart_from_reduced,
    chart_rhs,
    hamiltonian,
    integrate,
    make_params,
    numeric_jacobian,
    observables,
    reduced_ecc_sq,
    reduced_from_chart,
    reduced_rhs,
    select_chart,
)
from circkep.charts import chart_subsystem
from circkep.model import cartesian_from_reduced

GN = make_params(1, 0, 0.1)        # gamma = -2
APOS = make_params(1, 2, 0.5)      # gamma = 2, alpha > 0
A0 = make_params(0, 2, 0.3)        # gamma = 1, alpha = 0
CRIT = make_params(1, 1, 0.3)      # gamma = 0
CRIT_HI = make_params(1, 1, 0.7)

CASES = [
    (ChartId.GAMMA_NEG, GN),
    (ChartId.GAMMA_NEG, make_params(0, 1, 0.1)),
    (ChartId.GAMMA_POS_APOS, APOS),
    (ChartId.GAMMA_POS_A0, A0),
    (ChartId.CRITICAL, CRIT),
    (ChartId.CRITICAL_L2, CRIT_HI),
]


def _random_reduced(rng):
    return ReducedState(
        r=rng.uniform(0.1, 3.0),
        p=rng.uniform(-1.5, 1.5),
        l=rng.uniform(0.05, 1.8),
        theta=rng.uniform(-3, 3),
        t=rng.uniform(0, 2),
    )


class TestSelectChart:
    def test_routing(self):
        assert select_chart(make_params(0, 1, 0.1)) == ChartId.GAMMA_NEG
        assert select_chart(make_params(1, 2, 0.5)) == ChartId.GAMMA_POS_APOS
        assert select_chart(make_params(0, 2, 0.5)) == ChartId.GAMMA_POS_A0
        assert select_chart(make_params(1, 1, 0.2)) == ChartId.CRITICAL

    def test_invalid_chart_rejected(self):
        with pytest.raises(ValueError):
            chart_from_reduced(ChartId.GAMMA_NEG, APOS, ReducedState(r=1, p=0, l=1))


class TestTransforms:
    def test_gamma_neg_example(self):
        # gamma_tilde = 2: x = l^2
        c = chart_from_reduced(ChartId.GAMMA_NEG, GN, ReducedState(r=0.08, p=1.0, l=0.2))
        assert c.coords() == pytest.approx((2.0, 0.2, 0.04), rel=1e-13)

    def test_gamma_neg_inverse_example(self):
        s = reduced_from_chart(
            ChartId.GAMMA_NEG, GN, ChartState(ChartId.GAMMA_NEG, 2.0, 0.2, 0.04)
        )
        assert (s.r, s.p, s.l) == pytest.approx((0.08, 1.0, 0.2), rel=1e-13)

    def test_gamma_pos_example(self):
        # alpha=1, beta=2: r = q1^2, p = v11, l = q1^2 mu11
        c = chart_from_reduced(
            ChartId.GAMMA_POS_APOS, APOS, ReducedState(r=0.25, p=-1, l=0.5)
        )
        assert c.coords() == pytest.approx((0.5, -1.0, 2.0), rel=1e-13)

    def test_a0_example(self):
        # gamma=1: y = sqrt(r), v1 = p sqrt(r), mu1 = l/sqrt(r)
        c = chart_from_reduced(ChartId.GAMMA_POS_A0, A0, ReducedState(r=0.01, p=2, l=0.03))
        assert c.coords() == pytest.approx((0.1, 0.2, 0.3), rel=1e-13)

    def test_state_rejects_negative_scale_coords(self):
        with pytest.raises(ValueError, match="mu1"):
            ChartState(ChartId.CRITICAL_L2, -0.5, -0.1, 0.7)
        with pytest.raises(ValueError, match="x >="):
            ChartState(ChartId.GAMMA_NEG, 1.0, 0.2, -0.01)
        # boundary values are legitimate states
        ChartState(ChartId.GAMMA_POS_APOS, 0.0, -1.0, 0.0)

    def test_rejects_zero_l(self):
        with pytest.raises(ValueError):
            chart_from_reduced(ChartId.GAMMA_NEG, GN, ReducedState(r=1, p=0, l=0))

    def test_rejects_zero_radial(self):
        with pytest.raises(ValueError):
            reduced_from_chart(
                ChartId.GAMMA_NEG, GN, ChartState(ChartId.GAMMA_NEG, 1.0, 0.0, 0.0)
            )

    @pytest.mark.parametrize("chart,params", CASES)
    def test_round_trip(self, chart, params):
        rng = np.random.default_rng(17)
        for _ in range(30):
            s = _random_reduced(rng)
            c = chart_from_reduced(chart, params, s)
            b = reduced_from_chart(chart, params, c)
            assert b.r == pytest.approx(s.r, rel=1e-12)
            assert b.p == pytest.approx(s.p, rel=1e-12, abs=1e-13)
            assert b.l == pytest.approx(s.l, rel=1e-12)
            assert (b.theta, b.t) == (s.theta, s.t)

    def test_critical_chart_pair_consistency(self):
        # the two critical charts overlap through r1 = 1/mu1^2
        rng = np.random.default_rng(19)
        for _ in range(20):
            s = _random_reduced(rng)
            c1 = chart_from_reduced(ChartId.CRITICAL, CRIT, s)
            c2 = chart_from_reduced(ChartId.CRITICAL_L2, CRIT, s)
            r1, v, rho1 = c1.coords()
            v1, mu1, rho2 = c2.coords()
            assert r1 == pytest.approx(1.0 / mu1**2, rel=1e-12)
            assert v == pytest.approx(mu1 * v1, rel=1e-12, abs=1e-13)
            assert rho2 == pytest.approx(rho1 * math.sqrt(r1), rel=1e-12)


class TestChartFields:
    def test_gamma_neg_boundary_is_conservative(self):
        # on x = 0 the field reduces to the (r1, v) energy flow
        c = ChartState(ChartId.GAMMA_NEG, 2.0, 0.3, 0.0)
        d = chart_rhs(GN, c)
        assert d[0] == pytest.approx(0.3)
        assert d[1] == pytest.approx(-(2.0 - 1.0) / 8.0)
        assert d[2] == 0.0
        assert d[3] == pytest.approx(0.25)
        assert d[4] == 0.0  # physical time frozen on the boundary

    def test_gamma_pos_rest_point(self):
        v_star = -(0.5 ** (-1.0 / 2.0))
        c = ChartState(ChartId.GAMMA_POS_APOS, 0.0, v_star, 0.0)
        d = chart_rhs(APOS, c)
        assert np.allclose(d[:3], 0.0, atol=1e-15)

    @pytest.mark.parametrize("chart,params", CASES)
    def test_pushforward_identity(self, chart, params):
        # chart field = (dt/dtau) x reduced field, through the chart map
        rng = np.random.default_rng(23)
        worst = 0.0
        for _ in range(8):
            coords = rng.uniform(0.4, 1.6, size=3)
            if chart in (ChartId.CRITICAL, ChartId.GAMMA_NEG):
                coords[1] = rng.uniform(-0.8, 0.8)
            if chart == ChartId.CRITICAL_L2:
                coords[0] = rng.uniform(-1.2, -0.2)
            c = ChartState(chart, *coords, theta=0.3, t=0.1)
            v0 = np.array(c.as_vector())

            def mapped(vec):
                st = ChartState(chart, vec[0], vec[1], vec[2], vec[3], vec[4])
                return np.array(reduced_from_chart(chart, params, st).as_vector())

            J = numeric_jacobian(mapped, v0, scale=1e-7)
            fc = chart_rhs(params, c)
            assert fc[4] > 0.0  # the clock factor is positive in the interior
            fr = reduced_rhs(params, reduced_from_chart(chart, params, c))
            rel = np.max(np.abs(J @ fc - fc[4] * fr)) / max(
                1e-12, np.max(np.abs(fc[4] * fr))
            )
            worst = max(worst, rel)
        assert worst < 1e-6


class TestEccentricity:
    def test_hamiltonian_values(self):
        assert hamiltonian(1.0, 0.0).h == 0.0
        assert hamiltonian(2.0, 0.2).h == pytest.approx(0.145, rel=1e-14)

    def test_hamiltonian_matches_reduced_ecc(self):
        # 2 H equals the squared eccentricity of the matching reduced state
        assert 2 * hamiltonian(2.0, 0.2).h == pytest.approx(
            reduced_ecc_sq(0.08, 1.0, 0.2), rel=1e-12
        )

    def test_boundary_values(self):
        assert chart_ecc_sq(A0, ChartState(ChartId.GAMMA_POS_A0, 0.5, 0.0, 0.0)) == 1.0
        assert chart_ecc_sq(GN, ChartState(ChartId.GAMMA_NEG, 1.0, 0.0, 0.3)) == 0.0

    @pytest.mark.parametrize("chart,params", CASES)
    def test_matches_observables(self, chart, params):
        rng = np.random.default_rng(29)
        dummy = params
        for _ in range(20):
            s = _random_reduced(rng)
            c = chart_from_reduced(chart, params, s)
            via_chart = chart_ecc_sq(params, c)
            via_obs = observables(dummy, cartesian_from_reduced(s)).ecc_sq
            assert via_chart == pytest.approx(via_obs, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("chart,params", CASES)
    def test_ecc_vector_matches_observables(self, chart, params):
        rng = np.random.default_rng(31)
        for _ in range(10):
            s = _random_reduced(rng)
            c = chart_from_reduced(chart, params, s)
            got = chart_ecc_vector(chart, params, c.as_vector())
            want = observables(params, cartesian_from_reduced(s)).ecc_vector
            assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


class TestStructure:
    def test_boundary_flow_conserves_energy(self):
        # x = 0 slice of the gamma < 0 chart over 100 time units
        traj = integrate(
            chart_field(ChartId.GAMMA_NEG, GN),
            [2.0, 0.2, 0.0, 0.0, 0.0],
            IntegrationConfig(rtol=1e-11, atol=1e-13, stop_time=100.0),
        )
        H = 0.5 * traj.states[:, 1] ** 2 + (traj.states[:, 0] - 1.0) ** 2 / (
            2.0 * traj.states[:, 0] ** 2
        )
        assert np.max(np.abs(H - H[0])) < 1e-8
        assert np.all(traj.states[:, 2] == 0.0)  # boundary is invariant

    def test_critical_planar_divergence_formula(self):
        # FD divergence of the critical (r1, v) field vs the closed form
        # -2 delta (alpha+beta) r1^-(alpha+beta) (1+r1^2 v^2)^(alpha/2);
        # strictly negative everywhere, so the planar flow has no cycles
        f = chart_subsystem(ChartId.CRITICAL, CRIT, 2)
        rng = np.random.default_rng(37)
        a, b, d = CRIT.alpha, CRIT.beta, CRIT.delta
        for _ in range(15):
            r1 = rng.uniform(0.4, 2.5)
            v = rng.uniform(-1.0, 1.0)
            J = numeric_jacobian(f, (r1, v), scale=1e-6)
            div = J[0, 0] + J[1, 1]
            want = -2.0 * d * (a + b) * r1 ** (-a - b) * (1 + r1**2 * v**2) ** (a / 2.0)
            assert div == pytest.approx(want, rel=1e-5)
            assert div < 0.0

    def test_l2_divergence_negative_inward(self):
        # second critical chart, inward half-plane v1 <= 0, mu1 > 0
        f = chart_subsystem(ChartId.CRITICAL_L2, CRIT_HI, 2)
        rng = np.random.default_rng(41)
        for _ in range(15):
            v1 = rng.uniform(-2.5, 0.0)
            mu1 = rng.uniform(0.05, 2.0)
            J = numeric_jacobian(f, (v1, mu1), scale=1e-6)
            assert J[0, 0] + J[1, 1] < 0.0
