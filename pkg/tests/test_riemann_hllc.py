"""Tests for the HLLC solver and its wave-speed estimates."""

import numpy as np
import pytest

from shocktube import eos as eos_mod
from shocktube.eos import PrimState, TammannEos, prim_to_cons
from shocktube.riemann_exact import euler_flux, solve_star
from shocktube.riemann_hllc import (
    DegenerateSpeedsError,
    davis_speeds,
    hllc_fluctuations,
    hllc_star,
    roe_average_speeds,
)

AIR = eos_mod.MATERIALS["air"]
WATER = eos_mod.MATERIALS["water"]
PLASTIC = eos_mod.MATERIALS["plastic"]
IDEAL = TammannEos(gamma=1.4, p_inf=0.0, label="ideal")

SOD_L = PrimState(1.0, 0.0, 1.0)
SOD_R = PrimState(0.125, 0.0, 0.1)


def cons_array(state, eos):
    c = prim_to_cons(state, eos)
    return np.array([c.rho, c.momentum, c.E])


def neighbor_like_pair(rng, mat):
    """Jump sizes representative of adjacent cells in a running solve."""
    if mat.p_inf == 0.0:
        rho0, p0, du = rng.uniform(0.5, 3.0), rng.uniform(5e4, 4e5), 30.0
    else:
        rho0, p0, du = rng.uniform(950.0, 1100.0), rng.uniform(5e4, 2e6), 10.0
    left = PrimState(rho0, rng.uniform(-du, du), p0)
    right = PrimState(
        rho0 * rng.uniform(0.8, 1.25),
        left.u + rng.uniform(-du, du),
        p0 * rng.uniform(0.8, 1.25),
    )
    return left, right


class TestDavisSpeeds:
    def test_direct_formula(self):
        left = PrimState(1.4, 0.0, 1.0)  # c = 1
        right = PrimState(1.4, 0.0, 4.0)  # c = 2
        s_l, s_r = davis_speeds(left, right, IDEAL, IDEAL)
        assert s_l == pytest.approx(-2.0, rel=1e-12)
        assert s_r == pytest.approx(2.0, rel=1e-12)

    def test_symmetric_states(self):
        st = PrimState(1.0, 0.0, 1.0)
        s_l, s_r = davis_speeds(st, st, IDEAL, IDEAL)
        assert s_l == -s_r

    def test_air_water_dominated_by_water(self):
        air = PrimState(1.204, 0.0, 101325.0)
        water = PrimState(1000.0, 0.0, 101325.0)
        s_l, s_r = davis_speeds(air, water, AIR, WATER)
        assert s_l == pytest.approx(-1464.8291619673605, rel=1e-12)
        assert s_r == pytest.approx(1464.8291619673605, rel=1e-12)


class TestHllcStar:
    def test_mirror_collision(self):
        left = PrimState(1.0, 1.0, 1.0)
        right = PrimState(1.0, -1.0, 1.0)
        s_l, s_r = davis_speeds(left, right, IDEAL, IDEAL)
        sol = hllc_star(left, right, s_l, s_r, IDEAL, IDEAL)
        assert sol.S_star == pytest.approx(0.0, abs=1e-14)

    def test_identical_states(self):
        st = PrimState(2.0, 0.7, 3.0)
        s_l, s_r = davis_speeds(st, st, IDEAL, IDEAL)
        sol = hllc_star(st, st, s_l, s_r, IDEAL, IDEAL)
        assert sol.S_star == pytest.approx(0.7, rel=1e-13)
        assert np.allclose(sol.q_star_l, cons_array(st, IDEAL), rtol=1e-13)
        assert np.allclose(sol.q_star_r, cons_array(st, IDEAL), rtol=1e-13)

    def test_sod_contact_speed_regression(self):
        # Davis bounds are crude for Sod: the HLLC contact speed lands at
        # 0.676 against the exact 0.92745 (~27% low).  Locked as a
        # regression value; HLLC is accurate as a flux, not in its stars.
        s_l, s_r = davis_speeds(SOD_L, SOD_R, IDEAL, IDEAL)
        sol = hllc_star(SOD_L, SOD_R, s_l, s_r, IDEAL, IDEAL)
        assert sol.S_star == pytest.approx(0.6761234037828133, rel=1e-12)
        exact = solve_star(SOD_L, SOD_R, IDEAL, IDEAL)
        assert abs(sol.S_star - exact.u_star) / exact.u_star < 0.3

    def test_degenerate_speeds(self):
        with pytest.raises(DegenerateSpeedsError):
            hllc_star(SOD_L, SOD_R, 1.0, 1.0, IDEAL, IDEAL)

    def test_contact_preservation(self):
        # equal u and p, any densities: S* = u exactly and W1 = W3 = 0
        left = PrimState(1.0, 0.35, 2.0)
        right = PrimState(7.0, 0.35, 2.0)
        s_l, s_r = davis_speeds(left, right, IDEAL, IDEAL)
        sol = hllc_star(left, right, s_l, s_r, IDEAL, IDEAL)
        assert sol.S_star == pytest.approx(0.35, abs=1e-14)
        fl = hllc_fluctuations(left, right, IDEAL, IDEAL)
        assert np.allclose(fl.waves[0], 0.0, atol=1e-12)
        assert np.allclose(fl.waves[2], 0.0, atol=1e-12)


class TestHllcFluctuations:
    def test_lagrangian_shift_zero_contact(self):
        left = PrimState(1.83, 150.0, 1.8e5)
        right = PrimState(1000.0, 0.0, 101325.0)
        fl = hllc_fluctuations(left, right, AIR, WATER, lagrangian_shift=True)
        assert fl.speeds[1] == 0.0

    def test_conservation_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            mat = (AIR, WATER, PLASTIC)[rng.integers(3)]
            left, right = neighbor_like_pair(rng, mat)
            fl = hllc_fluctuations(left, right, mat, mat)
            df = euler_flux(cons_array(right, mat), right.p) - euler_flux(
                cons_array(left, mat), left.p
            )
            total = fl.a_minus + fl.a_plus
            scale = np.linalg.norm(df) + 1e3
            assert np.allclose(total, df, atol=1e-12 * scale)

    def test_interface_transmitted_speed_vs_exact(self):
        # post-shock air hitting quiescent water: the HLLC right speed
        # tracks the exact transmitted 3-shock speed closely
        left = PrimState(1.83287, 153.55, 184060.0)
        right = PrimState(1000.0, 0.0, 101325.0)
        fan = solve_star(left, right, AIR, WATER)
        fl = hllc_fluctuations(left, right, AIR, WATER)
        assert abs(fl.speeds[2] - fan.S_r) / fan.S_r < 0.02

    def test_transverse_row_passive(self):
        left = PrimState(1.0, 1.0, 1.0)
        right = PrimState(0.5, 0.5, 0.4)
        fl = hllc_fluctuations(left, right, IDEAL, IDEAL, v_l=2.0, v_r=-1.0)
        assert fl.waves.shape == (3, 4)
        # star transverse momentum is rho*_k v_k: jumps at contact only
        assert fl.waves[0][2] / fl.waves[0][0] == pytest.approx(2.0, rel=1e-12)
        assert fl.waves[2][2] / fl.waves[2][0] == pytest.approx(-1.0, rel=1e-12)


class TestRoeSpeeds:
    def test_identical_states(self):
        st = PrimState(1000.0, 3.0, 2e5)
        c = eos_mod.sound_speed(st, WATER)
        s_l, s_r = roe_average_speeds(st, st, WATER, WATER)
        assert s_l == pytest.approx(3.0 - c, rel=1e-12)
        assert s_r == pytest.approx(3.0 + c, rel=1e-12)

    def test_contact_only_problem(self):
        left = PrimState(1.0, 0.2, 1.5)
        right = PrimState(4.0, 0.2, 1.5)
        s_l, s_r = roe_average_speeds(left, right, IDEAL, IDEAL)
        assert s_l < 0.2 < s_r
        sol = hllc_star(left, right, s_l, s_r, IDEAL, IDEAL)
        assert sol.S_star == pytest.approx(0.2, abs=1e-14)

    def test_sod_close_to_davis(self):
        d = davis_speeds(SOD_L, SOD_R, IDEAL, IDEAL)
        r = roe_average_speeds(SOD_L, SOD_R, IDEAL, IDEAL)
        assert abs(r[0] - d[0]) <= 0.1 * abs(d[0])
        assert abs(r[1] - d[1]) <= 0.1 * abs(d[1])


class TestConsistencyWithExact:
    def test_star_pressure_and_positivity(self):
        # neighbor-like jumps are the regime the interior HLLC solver runs
        # in; 0.03 is the calibrated regression bound (worst observed 0.0193)
        rng = np.random.default_rng(101)
        worst = 0.0
        for _ in range(1000):
            mat = (AIR, WATER, PLASTIC)[rng.integers(3)]
            left, right = neighbor_like_pair(rng, mat)
            fan = solve_star(left, right, mat, mat)
            s_l, s_r = davis_speeds(left, right, mat, mat)
            sol = hllc_star(left, right, s_l, s_r, mat, mat)
            worst = max(worst, abs(sol.p_star - fan.p_star) / (fan.p_star + mat.p_inf))
            assert sol.q_star_l[0] > 0.0
            assert sol.q_star_r[0] > 0.0
        assert worst < 0.03
