"""Tests for the layered-interface acoustic transmission oracle."""

import numpy as np
import pytest

from shocktube import eos as eos_mod
from shocktube.acoustics import (
    AcousticMedium,
    interface_coefficients,
    nth_transmission,
    reverberation_time,
    total_transmission,
)


def default_impedances():
    a = AcousticMedium.from_eos(1.204, 101325.0, eos_mod.MATERIALS["air"])
    p = AcousticMedium.from_eos(1050.0, 101325.0, eos_mod.MATERIALS["plastic"])
    w = AcousticMedium.from_eos(1000.0, 101325.0, eos_mod.MATERIALS["water"])
    return a.Z, p.Z, w.Z


class TestInterfaceCoefficients:
    def test_matched(self):
        t, r = interface_coefficients(5.0, 5.0)
        assert (t, r) == (1.0, 0.0)

    def test_rigid_wall_limit(self):
        t, r = interface_coefficients(1.0, 1e15)
        assert t == pytest.approx(2.0, rel=1e-12)
        assert r == pytest.approx(1.0, rel=1e-12)

    def test_air_water(self):
        z_a, _, z_w = default_impedances()
        t, r = interface_coefficients(z_a, z_w)
        assert t == pytest.approx(1.99944, abs=5e-5)
        assert 1.0 + r == pytest.approx(t, rel=1e-14)

    def test_pressure_continuity_random(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            z_a, z_b = rng.uniform(1.0, 1e7, size=2)
            t, r = interface_coefficients(z_a, z_b)
            assert 1.0 + r == pytest.approx(t, rel=1e-13)

    def test_invalid(self):
        with pytest.raises(ValueError):
            interface_coefficients(-1.0, 1.0)


class TestNthTransmission:
    def test_first_is_product_of_single_interfaces(self):
        z_a, z_p, z_w = default_impedances()
        t_ap, _ = interface_coefficients(z_a, z_p)
        t_pw, _ = interface_coefficients(z_p, z_w)
        assert nth_transmission(z_a, z_p, z_w, 1) == pytest.approx(t_ap * t_pw, rel=1e-14)

    def test_matched_layer_truncates(self):
        z_a, _, z_w = default_impedances()
        assert nth_transmission(z_a, z_w, z_w, 2) == 0.0
        assert nth_transmission(z_a, z_w, z_w, 1) == pytest.approx(
            total_transmission(z_a, z_w), rel=1e-14
        )

    def test_partial_sums_converge_to_closed_form(self):
        z_a, z_p, z_w = default_impedances()
        total = total_transmission(z_a, z_w)
        partial = np.cumsum([nth_transmission(z_a, z_p, z_w, n) for n in range(1, 26)])
        errs = np.abs(partial - total)
        assert errs[-1] < 1e-10 * total
        # magnitude envelope shrinks monotonically (alternating-ish series)
        assert errs[-1] <= errs[0]

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            nth_transmission(1.0, 2.0, 3.0, 0)


class TestTotalTransmission:
    def test_matched(self):
        assert total_transmission(7.0, 7.0) == 1.0

    def test_series_identity_random_triples(self):
        # sum enough terms for the geometric tail |r|^N/(1-|r|) to drop
        # below the tolerance, then the total is independent of Z_p
        rng = np.random.default_rng(3)
        for _ in range(100):
            z_a, z_p, z_w = 10.0 ** rng.uniform(1.0, 7.0, size=3)
            ratio = abs(((z_a - z_p) * (z_w - z_p)) / ((z_a + z_p) * (z_w + z_p)))
            n_terms = 50
            if ratio > 0.0:
                n_terms = max(50, int(np.ceil(np.log(1e-12 * (1 - ratio)) / np.log(ratio))) + 1)
            s = sum(nth_transmission(z_a, z_p, z_w, n) for n in range(1, n_terms + 1))
            assert s == pytest.approx(total_transmission(z_a, z_w), rel=1e-9)

    def test_series_ratio_below_one(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            z_a, z_p, z_w = rng.uniform(1.0, 1e8, size=3)
            ratio = ((z_a - z_p) * (z_w - z_p)) / ((z_a + z_p) * (z_w + z_p))
            assert abs(ratio) < 1.0


class TestReverberationTime:
    def test_zero_width(self):
        assert reverberation_time(0.0, 2240.0) == 0.0

    def test_default_plastic(self):
        c_p = eos_mod.sound_speed_rp(1050.0, 101325.0, eos_mod.MATERIALS["plastic"])
        tau = reverberation_time(0.1, c_p)
        assert tau == pytest.approx(8.93e-5, abs=1e-7)

    def test_linear_in_width(self):
        assert reverberation_time(0.4, 100.0) == pytest.approx(
            2.0 * reverberation_time(0.2, 100.0), rel=1e-14
        )

    def test_invalid(self):
        with pytest.raises(ValueError):
            reverberation_time(-1.0, 100.0)


class TestAcousticMedium:
    def test_impedance(self):
        m = AcousticMedium(1000.0, 1500.0)
        assert m.Z == 1.5e6

    def test_validation(self):
        with pytest.raises(ValueError):
            AcousticMedium(0.0, 1500.0)
