import mpmath
import numpy as np
import pytest

from wiretap_space.receiver import DetectorModel
from wiretap_space.secrecy import (
    ClockedLink,
    devetak_winter_rate,
    dw_rate_symmetric,
    optimal_signal_strength,
    plob_bound,
    private_capacity,
    private_capacity_fixed,
    private_capacity_symmetric,
    private_rate,
    required_laser_power,
)


class TestPrivateCapacityFixed:
    def test_reference_point(self, day_detector):
        point = private_capacity_fixed(day_detector, 4.0, 0.1, 0.5)
        assert point.private_capacity == pytest.approx(0.681, abs=0.01)

    def test_no_signal_no_information(self, day_detector):
        point = private_capacity_fixed(day_detector, 0.0, 0.3, 0.5)
        assert point.info_bob == pytest.approx(0.0, abs=1e-12)
        assert point.private_capacity == 0.0
        assert point.dw_rate == 0.0

    def test_near_unity_degradation_clips(self):
        detector = DetectorModel(p_dark=0.0, eta_optical=1.0, stray_mean=0.0)
        point = private_capacity_fixed(detector, 4.0, 0.999, 0.5)
        assert point.private_capacity < 0.02

    def test_invalid_gamma(self, day_detector):
        for gamma in (0.0, 1.0, 1.5, -0.1):
            with pytest.raises(ValueError):
                private_capacity_fixed(day_detector, 4.0, gamma, 0.5)

    @pytest.mark.parametrize("q", [0.2, 0.5, 0.8])
    def test_point_fields_consistent(self, day_detector, q):
        point = private_capacity_fixed(day_detector, 4.0, 0.1, q)
        assert point.q == q
        assert point.private_capacity == pytest.approx(
            max(point.info_bob - point.info_eve_helstrom, 0.0), abs=1e-15
        )
        assert point.dw_rate == pytest.approx(
            max(point.info_bob - point.holevo_eve, 0.0), abs=1e-15
        )


class TestClosedFormConsistency:
    """The general-prior machinery and the uniform-prior closed forms are
    independent code paths; at q = 1/2 they must agree to 1e-9."""

    @pytest.mark.parametrize("gamma", [0.05, 0.1, 0.3, 0.6, 0.9])
    @pytest.mark.parametrize("photons", [0.1, 1.0, 4.0, 12.0])
    def test_capacity_paths_agree(self, day_detector, gamma, photons):
        general = private_capacity_fixed(day_detector, photons, gamma, 0.5).private_capacity
        closed = private_capacity_symmetric(day_detector, photons, gamma)
        assert general == pytest.approx(closed, abs=1e-9)

    @pytest.mark.parametrize("gamma", [0.05, 0.1, 0.3, 0.6, 0.9])
    @pytest.mark.parametrize("photons", [0.1, 1.0, 4.0, 12.0])
    def test_dw_paths_agree(self, day_detector, gamma, photons):
        general = devetak_winter_rate(day_detector, photons, gamma, 0.5)
        closed = dw_rate_symmetric(day_detector, photons, gamma)
        assert general == pytest.approx(closed, abs=1e-9)

    def test_dw_reference_value(self):
        detector = DetectorModel(p_dark=1e-9, eta_optical=1.0, stray_mean=1e-4)
        assert dw_rate_symmetric(detector, 4.0, 0.1) == pytest.approx(0.494, abs=0.01)


class TestDevetakWinter:
    def test_zero_at_no_signal(self, day_detector):
        assert devetak_winter_rate(day_detector, 0.0, 0.1, 0.5) == 0.0

    @pytest.mark.parametrize("gamma", np.linspace(0.05, 0.95, 7))
    @pytest.mark.parametrize("photons", [0.2, 2.0, 8.0, 18.0])
    def test_never_exceeds_capacity(self, day_detector, gamma, photons):
        point = private_capacity_fixed(day_detector, photons, float(gamma), 0.5)
        assert point.dw_rate <= point.private_capacity + 1e-9


class TestQOptimisation:
    def test_optimum_near_uniform(self, day_detector):
        point = private_capacity(day_detector, 4.0, 0.1)
        assert 0.4 <= point.q <= 0.6
        fixed = private_capacity_fixed(day_detector, 4.0, 0.1, 0.5)
        assert point.private_capacity >= fixed.private_capacity - 1e-12

    def test_positive_capacity_at_heavy_degradation(self, day_detector):
        mu, best = optimal_signal_strength(day_detector, 0.6)
        assert best.private_capacity > 0.0


class TestSignalStrengthOptimisation:
    def test_peak_location_and_value(self, day_detector):
        mu, best = optimal_signal_strength(day_detector, 0.1)
        assert mu == pytest.approx(4.0, abs=1.5)
        assert best.private_capacity == pytest.approx(0.68, abs=0.02)

    def test_monotone_in_gamma(self, day_detector):
        gammas = [0.05, 0.2, 0.4, 0.6, 0.8, 0.95]
        caps = [private_capacity(day_detector, 4.0, g).private_capacity for g in gammas]
        assert all(b <= a + 1e-9 for a, b in zip(caps, caps[1:]))

    def test_noise_degrades_capacity(self):
        caps = []
        for stray in (1e-7, 1e-4, 1e-2):
            detector = DetectorModel(p_dark=1e-7, eta_optical=1.0, stray_mean=stray)
            caps.append(private_capacity(detector, 4.0, 0.1).private_capacity)
        assert caps[0] > caps[1] > caps[2]
        assert caps[2] > 0.0  # cloudy-day stray light still leaves a positive rate


class TestPlobBound:
    def test_opaque_channel(self):
        assert plob_bound(0.0) == 0.0

    def test_reference_values(self):
        expected_22db = float(-mpmath.log(1 - mpmath.mpf(10) ** mpmath.mpf("-2.2"), 2))
        assert plob_bound(10**-2.2) == pytest.approx(expected_22db, rel=1e-12)
        assert plob_bound(10**-2.2) == pytest.approx(9.13e-3, abs=1e-5)
        expected_40db = float(-mpmath.log(1 - mpmath.mpf(10) ** -4, 2))
        assert plob_bound(1e-4) == pytest.approx(expected_40db, rel=1e-12)
        assert plob_bound(1e-4) == pytest.approx(1.443e-4, abs=1e-7)

    def test_diverges_at_unit_transmission(self):
        with pytest.raises(ValueError):
            plob_bound(1.0)
        with pytest.raises(ValueError):
            plob_bound(1.2)


class TestRateAndPower:
    def test_private_rate(self):
        link = ClockedLink(clock_rate=1e9)
        assert private_rate(0.68, link) == pytest.approx(680e6)
        assert private_rate(0.0, link) == 0.0
        assert private_rate(9.13e-3, link) == pytest.approx(9.13e6)

    def test_laser_power_leo(self):
        link = ClockedLink(clock_rate=1e9, wavelength=850e-9)
        power = required_laser_power(4.0, 10**-4.2, link)
        assert power == pytest.approx(14.8e-6, rel=0.2)

    def test_laser_power_geo(self):
        link = ClockedLink(clock_rate=1e9, wavelength=850e-9)
        power = required_laser_power(4.0, 10**-7.2, link)
        assert power == pytest.approx(14.8e-3, rel=0.2)

    def test_zero_target(self):
        assert required_laser_power(0.0, 0.5, ClockedLink()) == 0.0

    def test_efficiency_bounds(self):
        with pytest.raises(ValueError):
            required_laser_power(4.0, 0.0, ClockedLink())
        with pytest.raises(ValueError):
            required_laser_power(4.0, 1.5, ClockedLink())


class TestUnclippedContinuity:
    def test_difference_continuous_through_zero(self, day_detector):
        # The clipped capacity has a flat zero plateau; the underlying
        # difference crosses it smoothly.  Scan gamma through the transition.
        gammas = np.linspace(0.55, 0.75, 41)
        diffs = []
        for gamma in gammas:
            point = private_capacity_fixed(day_detector, 1.0, float(gamma), 0.5)
            diffs.append(point.info_bob - point.info_eve_helstrom)
        steps = np.abs(np.diff(diffs))
        assert steps.max() < 0.02
