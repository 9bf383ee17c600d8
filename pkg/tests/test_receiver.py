import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import entropy_bits
from wiretap_space.receiver import BobChannel, DetectorModel, bob_click_model, mutual_info_bob


class TestBobClickModel:
    def test_dark_silent_detector(self):
        ch = bob_click_model(DetectorModel(p_dark=0.0, eta_optical=1.0, stray_mean=0.0), 0.0)
        assert ch.eps0 == 1.0
        assert ch.eps1 == 1.0

    def test_reference_operating_point(self):
        det = DetectorModel(p_dark=1e-7, eta_optical=1.0, stray_mean=1e-4)
        ch = bob_click_model(det, 4.0)
        assert ch.eps0 == pytest.approx((1 - 1e-7) * math.exp(-1e-4), rel=1e-14)
        assert ch.eps0 == pytest.approx(0.99990, abs=1e-5)
        assert ch.eps1 == pytest.approx((1 - 1e-7) * math.exp(-4.0001), rel=1e-14)
        assert ch.eps1 == pytest.approx(0.0183138, abs=1e-6)

    def test_saturated_dark_counts(self):
        ch = bob_click_model(DetectorModel(p_dark=1.0, eta_optical=0.5, stray_mean=7.0), 3.0)
        assert ch.eps0 == 0.0
        assert ch.eps1 == 0.0

    def test_stray_light_sees_internal_optics_only(self):
        det = DetectorModel(p_dark=0.0, eta_optical=0.25, stray_mean=2.0)
        ch = bob_click_model(det, 1.0)
        assert ch.eps0 == pytest.approx(math.exp(-0.5), rel=1e-14)
        assert ch.eps1 == pytest.approx(math.exp(-1.5), rel=1e-14)

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=1e-6, max_value=1.0),
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.0, max_value=50.0),
    )
    def test_signal_only_increases_clicks(self, p_dark, eta_o, stray, photons):
        ch = bob_click_model(DetectorModel(p_dark, eta_o, stray), photons)
        assert ch.eps1 <= ch.eps0

    def test_negative_photons_rejected(self):
        with pytest.raises(ValueError):
            bob_click_model(DetectorModel(), -1.0)


class TestMutualInfoBob:
    def test_noiseless_binary_channel(self):
        assert mutual_info_bob(0.5, BobChannel(eps0=1.0, eps1=0.0)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("eps", [0.0, 0.3, 1.0])
    @pytest.mark.parametrize("q", [0.0, 0.2, 0.5, 1.0])
    def test_useless_channel(self, eps, q):
        assert mutual_info_bob(q, BobChannel(eps0=eps, eps1=eps)) == pytest.approx(0.0, abs=1e-12)

    def test_reference_operating_point(self):
        det = DetectorModel(p_dark=1e-7, eta_optical=1.0, stray_mean=1e-4)
        ch = bob_click_model(det, 4.0)
        expected = (
            entropy_bits(0.5 * (ch.eps0 + ch.eps1))
            - 0.5 * entropy_bits(ch.eps0)
            - 0.5 * entropy_bits(ch.eps1)
        )
        value = mutual_info_bob(0.5, ch)
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(0.9332, abs=1e-3)

    def test_monotone_in_received_photons(self):
        det = DetectorModel(p_dark=1e-7, eta_optical=1.0, stray_mean=1e-4)
        photons = np.linspace(0.0, 20.0, 60)
        infos = [mutual_info_bob(0.5, bob_click_model(det, float(n))) for n in photons]
        assert all(b >= a - 1e-12 for a, b in zip(infos, infos[1:]))

    def test_bounded_unit(self):
        det = DetectorModel(p_dark=1e-6, eta_optical=0.8, stray_mean=1e-3)
        for q in (0.1, 0.5, 0.9):
            for mu in (0.1, 1.0, 10.0):
                value = mutual_info_bob(q, bob_click_model(det, mu))
                assert 0.0 <= value <= 1.0

    def test_zero_iff_trivial(self):
        ch = bob_click_model(DetectorModel(p_dark=1e-7, stray_mean=1e-4), 4.0)
        assert mutual_info_bob(0.0, ch) == pytest.approx(0.0, abs=1e-12)
        assert mutual_info_bob(1.0, ch) == pytest.approx(0.0, abs=1e-12)
        assert mutual_info_bob(0.5, ch) > 0.5


class TestValidation:
    def test_detector_bounds(self):
        with pytest.raises(ValueError):
            DetectorModel(p_dark=-0.1)
        with pytest.raises(ValueError):
            DetectorModel(eta_optical=0.0)
        with pytest.raises(ValueError):
            DetectorModel(stray_mean=-1.0)

    def test_channel_ordering(self):
        with pytest.raises(ValueError):
            BobChannel(eps0=0.2, eps1=0.5)
        with pytest.raises(ValueError):
            BobChannel(eps0=1.2, eps1=0.5)
