"""Closed-form steady-state relations used as simulator oracles."""

import math

import pytest
from hypothesis import given, strategies as st

from dualq.analysis import (CouplingInputs, classic_mean_rtt, coupling_factor,
                            creno_validity_limit, marks_per_round,
                            predict_rate_ratio, reno_rate,
                            rtt_independence_floor, scalable_rate,
                            signals_per_round_scaling)


class TestCouplingFactor:
    def test_reno_reference_value(self):
        res = coupling_factor(CouplingInputs(beta_c=0.5))
        assert res.k == pytest.approx(1.96, abs=0.005)

    def test_creno_reference_value(self):
        res = coupling_factor(CouplingInputs(beta_c=0.7))
        assert res.k == pytest.approx(2.22, abs=0.005)

    def test_validity_flag_tracks_reference_rtt(self):
        # beta_c = 0.7, target = 15 ms -> validity limit 35 ms
        assert creno_validity_limit(0.015, 0.7) == pytest.approx(0.035)
        assert not coupling_factor(CouplingInputs(r_b_star=0.025)).outside_validity
        assert coupling_factor(CouplingInputs(r_b_star=0.040)).outside_validity

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            coupling_factor(CouplingInputs(r_b_star=0.0))
        with pytest.raises(ValueError):
            coupling_factor(CouplingInputs(beta_c=1.0))

    @given(st.floats(min_value=0.005, max_value=0.2))
    def test_monotone_decreasing_in_reference_rtt(self, r_star):
        k1 = coupling_factor(CouplingInputs(r_b_star=r_star)).k
        k2 = coupling_factor(CouplingInputs(r_b_star=r_star * 2)).k
        assert k2 < k1


class TestRateLaws:
    def test_reno_rate_worked_example(self):
        # 20 ms RTT at p = 0.015: (1/0.02) * sqrt(3 / 0.03) = 500 pkt/s
        assert reno_rate(0.02, 0.015) == pytest.approx(500.0)

    def test_scalable_rate_worked_example(self):
        # 10 ms RTT floors to 25 ms: 2 / (0.025 * 0.02) = 4000 pkt/s
        assert scalable_rate(0.01, 0.02) == pytest.approx(4000.0)

    def test_rtt_floor(self):
        assert rtt_independence_floor(0.005) == 0.025
        assert rtt_independence_floor(0.025) == 0.025
        assert rtt_independence_floor(0.1) == pytest.approx(0.1)

    def test_rates_reject_nonpositive_probability(self):
        with pytest.raises(ValueError):
            reno_rate(0.01, 0.0)
        with pytest.raises(ValueError):
            scalable_rate(0.01, -0.1)

    @given(st.floats(min_value=1e-4, max_value=0.9),
           st.floats(min_value=1e-4, max_value=0.89))
    def test_reno_rate_monotone_decreasing_in_p(self, p, dec):
        assert reno_rate(0.02, p) > reno_rate(0.02, p + 0.1 * dec + 1e-6)

    @given(st.floats(min_value=0.001, max_value=0.2),
           st.floats(min_value=1e-4, max_value=1.0))
    def test_scalable_rate_rtt_independent_below_floor(self, rtt, p):
        assert scalable_rate(min(rtt, 0.025), p) == \
            pytest.approx(scalable_rate(0.001, p))


class TestClassicMeanRtt:
    def test_sawtooth_average(self):
        # peaks at base + target, averaged by (1 + beta) / 2
        assert classic_mean_rtt(0.010, 0.015, 0.7) == pytest.approx(0.02125)

    def test_reduces_to_peak_when_beta_one_sided(self):
        assert classic_mean_rtt(0.01, 0.015, 1.0) == pytest.approx(0.025)


class TestSignalsPerRound:
    def test_marks_per_round_is_p_times_window(self):
        assert marks_per_round(100, 0.02) == pytest.approx(2.0)

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            marks_per_round(0.5, 0.02)
        with pytest.raises(ValueError):
            marks_per_round(100, 0.0)

    def test_scaling_exponents(self):
        # scalable control (B = 1): signal count invariant with window
        assert signals_per_round_scaling(4.0, 1.0) == pytest.approx(1.0)
        # classic control (B = 1/2): quadruple window -> quarter the signals
        assert signals_per_round_scaling(4.0, 0.5) == pytest.approx(0.25)


class TestRateRatioPrediction:
    def test_reference_point_ratio(self):
        # both flows at the 25 ms reference with default k = 2: the ratio
        # equals k*/k where k* = 2.2209
        pred = predict_rate_ratio(0.025, 0.025)
        assert pred.ratio == pytest.approx(1.1105, abs=1e-3)

    def test_unity_at_reference_with_matched_coupling(self):
        pred = predict_rate_ratio(0.025, 0.025, k=2.2209)
        assert pred.ratio == pytest.approx(1.0, abs=1e-3)

    def test_rates_fill_given_capacity(self):
        pred = predict_rate_ratio(0.01, 0.01, capacity_pps=40e6 / 8 / 1500)
        assert pred.rate_l + pred.rate_c == pytest.approx(40e6 / 8 / 1500,
                                                          rel=1e-6)
        assert pred.rate_l / pred.rate_c == pytest.approx(pred.ratio, rel=1e-6)
        assert 0 < pred.p_prime < 1

    def test_classic_rtt_advantage_bounded_by_floor(self):
        # 5 ms scalable vs 100 ms classic: classic mean RTT ~97.75 ms over a
        # 25 ms floor, so the predicted advantage stays below 8
        pred = predict_rate_ratio(0.005, 0.100)
        assert pred.ratio < 8.0
        assert pred.outside_validity

    @given(st.floats(min_value=0.001, max_value=0.3))
    def test_ratio_increases_with_classic_rtt(self, r_c):
        a = predict_rate_ratio(0.01, r_c).ratio
        b = predict_rate_ratio(0.01, r_c * 1.5).ratio
        assert b > a
