"""Tests for theta computation and flux-limiter functions."""

import numpy as np
import pytest

from shocktube import eos as eos_mod
from shocktube.limiters import (
    MC,
    MINMOD,
    MODIFIED_MINMOD,
    NONE,
    VANLEER,
    LimiterKind,
    acoustic_alphas,
    flux_limiter,
    limit_waves,
    theta_standard,
    theta_transmission,
)


class TestThetaStandard:
    def test_equal_waves(self):
        w = np.array([1.0, -2.0, 0.5])
        assert theta_standard(w, w) == pytest.approx(1.0, rel=1e-14)

    def test_zero_upwind(self):
        w = np.array([1.0, -2.0, 0.5])
        assert theta_standard(w, np.zeros(3)) == 0.0

    def test_scaled_upwind(self):
        w = np.array([1.0, -2.0, 0.5])
        assert theta_standard(w, 2.0 * w) == pytest.approx(2.0, rel=1e-14)

    def test_zero_here(self):
        assert theta_standard(np.zeros(3), np.ones(3)) == 0.0

    def test_batched(self):
        here = np.array([[1.0, 0.0], [0.0, 0.0]])
        up = np.array([[3.0, 0.0], [1.0, 1.0]])
        out = theta_standard(here, up)
        assert out == pytest.approx([3.0, 0.0])


class TestThetaTransmission:
    def test_equal_speeds_reduces_to_ratio(self):
        assert theta_transmission(0.6, 0.4, 2.0, 2.0, 1) == pytest.approx(1.5, rel=1e-14)
        assert theta_transmission(0.6, 0.4, 2.0, 2.0, 3) == pytest.approx(1.5, rel=1e-14)

    def test_limit_two(self):
        # equal strengths, c_plus >> c_minus, family 1 -> theta -> 2
        assert theta_transmission(1.0, 1.0, 1e-9, 1.0, 1) == pytest.approx(2.0, rel=1e-6)

    def test_air_water_edge(self):
        c_air = eos_mod.sound_speed_rp(1.204, 101325.0, eos_mod.MATERIALS["air"])
        c_wat = eos_mod.sound_speed_rp(1000.0, 101325.0, eos_mod.MATERIALS["water"])
        th = theta_transmission(1.0, 1.0, c_air, c_wat, 1)
        assert th == pytest.approx(2.0 * c_wat / (c_air + c_wat), rel=1e-14)
        assert th == pytest.approx(1.621, abs=2e-3)

    def test_zero_here_strength(self):
        assert theta_transmission(1.0, 0.0, 1.0, 2.0, 1) == 0.0

    def test_bad_family(self):
        with pytest.raises(ValueError):
            theta_transmission(1.0, 1.0, 1.0, 1.0, 2)


class TestAcousticAlphas:
    def test_pure_left_going(self):
        # wave aligned with [1, -c_left] has no right-going content
        c_l, c_r = 2.0, 5.0
        a1, a3 = acoustic_alphas(3.0, -3.0 * c_l, c_l, c_r)
        assert a1 == pytest.approx(3.0, rel=1e-14)
        assert a3 == pytest.approx(0.0, abs=1e-14)

    def test_reconstruction(self):
        c_l, c_r = 343.0, 1465.0
        a1, a3 = acoustic_alphas(1.7, -120.0, c_l, c_r)
        assert a1 * 1.0 + a3 * 1.0 == pytest.approx(1.7, rel=1e-12)
        assert -a1 * c_l + a3 * c_r == pytest.approx(-120.0, rel=1e-12)


class TestFluxLimiter:
    def test_minmod_values(self):
        assert flux_limiter(0.5, MINMOD) == 0.5
        assert flux_limiter(2.0, MINMOD) == 1.0
        assert flux_limiter(-1.0, MINMOD) == 0.0

    def test_modified_minmod_values(self):
        assert flux_limiter(3.0, MODIFIED_MINMOD) == pytest.approx(1.0)
        assert flux_limiter(1.5, MODIFIED_MINMOD) == pytest.approx(0.5)
        # phi(1) = 1/3 by design: second-order accuracy is given up
        assert flux_limiter(1.0, MODIFIED_MINMOD) == pytest.approx(1.0 / 3.0)

    def test_second_order_consistency(self):
        for kind in (MINMOD, MC, VANLEER):
            assert flux_limiter(1.0, kind) == pytest.approx(1.0, rel=1e-14)

    def test_modified_minmod_scale_one_is_minmod(self):
        kind = LimiterKind("modified_minmod", scale=1.0)
        thetas = np.linspace(-2.0, 4.0, 101)
        assert np.allclose(flux_limiter(thetas, kind), flux_limiter(thetas, MINMOD))

    def test_tvd_region_membership(self):
        thetas = np.linspace(-3.0, 6.0, 901)
        bound = np.maximum(0.0, np.minimum(2.0, 2.0 * thetas))
        for kind in (MINMOD, MODIFIED_MINMOD, MC, VANLEER):
            phi = flux_limiter(thetas, kind)
            assert np.all(phi >= 0.0)
            assert np.all(phi <= bound + 1e-14)

    def test_none_is_unlimited(self):
        thetas = np.linspace(-3.0, 6.0, 31)
        assert np.all(flux_limiter(thetas, NONE) == 1.0)

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            LimiterKind("superbee")
        with pytest.raises(ValueError):
            LimiterKind("modified_minmod", scale=0.0)


class TestLimitWaves:
    def test_none_identity(self):
        waves = np.arange(9.0).reshape(3, 3)
        out = limit_waves(waves, np.zeros(3), np.array([0.3, -2.0, 5.0]), NONE)
        assert np.array_equal(out, waves)

    def test_negative_thetas_zero_waves(self):
        waves = np.ones((3, 3))
        out = limit_waves(waves, np.zeros(3), np.array([-1.0, -0.5, -3.0]), MINMOD)
        assert np.all(out == 0.0)

    def test_theta_one_minmod_identity(self):
        waves = np.arange(9.0).reshape(3, 3)
        out = limit_waves(waves, np.zeros(3), np.ones(3), MINMOD)
        assert np.allclose(out, waves)
