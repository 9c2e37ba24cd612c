"""Closed-form steady-state relations used as oracles for the simulator.

All rates are in packets per second, RTTs in seconds, probabilities in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Virtual-RTT floor applied by the scalable control's RTT-independence.
RTT_FLOOR = 0.025

BETA_RENO = 0.5
BETA_CRENO = 0.7


def rtt_independence_floor(rtt: float) -> float:
    """Effective RTT seen by the scalable control: max(rtt, 25 ms)."""
    return max(rtt, RTT_FLOOR)


def reno_rate(rtt: float, p: float) -> float:
    """Steady-state Reno packet rate at signalling probability ``p``."""
    if p <= 0:
        raise ValueError("probability must be positive")
    return (1.0 / rtt) * math.sqrt(3.0 / (2.0 * p))


def scalable_rate(rtt: float, p: float) -> float:
    """Steady-state scalable-control packet rate at marking probability ``p``."""
    if p <= 0:
        raise ValueError("probability must be positive")
    return 2.0 / (rtt_independence_floor(rtt) * p)


def classic_mean_rtt(base_rtt: float, target: float, beta_c: float) -> float:
    """Classic RTT averaged over the sawteeth.

    The sawtooth peaks settle around base_rtt + target and are factored down
    to the average by (1 + beta_c) / 2.
    """
    return 0.5 * (1.0 + beta_c) * (base_rtt + target)


def creno_validity_limit(target: float, beta_c: float) -> float:
    """Base RTT above which the sawtooth under-utilizes the buffer and the
    averaged-RTT approximation degrades."""
    return target * beta_c / (1.0 - beta_c)


@dataclass
class CouplingInputs:
    beta_c: float = BETA_CRENO
    target: float = 0.015
    r_b_star: float = RTT_FLOOR

    def validate(self) -> None:
        if self.r_b_star <= 0:
            raise ValueError("reference base RTT must be positive")
        if not 0 < self.beta_c < 1:
            raise ValueError("multiplicative decrease factor must be in (0, 1)")


@dataclass
class CouplingResult:
    k: float
    #: True when r_b_star exceeds the sawtooth-validity range of the
    #: averaged-RTT approximation; the value is still usable, just cruder.
    outside_validity: bool


def coupling_factor(inputs: CouplingInputs) -> CouplingResult:
    """Constant coupling factor balancing scalable vs. classic rates at the
    reference base RTT."""
    inputs.validate()
    k = (math.sqrt(8.0 / 3.0) * 0.5 * (1.0 + inputs.beta_c)
         * (1.0 + inputs.target / inputs.r_b_star))
    limit = creno_validity_limit(inputs.target, inputs.beta_c)
    return CouplingResult(k=k, outside_validity=inputs.r_b_star > limit)


def marks_per_round(window: float, p: float) -> float:
    """Expected congestion signals per round: v = p * W."""
    if window < 1 or not 0 < p <= 1:
        raise ValueError("need window >= 1 and 0 < p <= 1")
    return p * window


def signals_per_round_scaling(window_ratio: float, b: float) -> float:
    """Factor by which v changes when the window scales by ``window_ratio``
    for a control with response exponent ``b``: v ∝ W^(1 - 1/B)."""
    return window_ratio ** (1.0 - 1.0 / b)


@dataclass
class RatioPrediction:
    ratio: float            # scalable rate / classic rate
    p_prime: float          # base probability filling the link (if capacity given)
    rate_l: float
    rate_c: float
    outside_validity: bool


def predict_rate_ratio(r_b_l: float, r_b_c: float, *, k: float = 2.0,
                       beta_c: float = BETA_CRENO, target: float = 0.015,
                       capacity_pps: float | None = None) -> RatioPrediction:
    """Solve the coupled steady-state equations for one scalable and one
    classic long flow sharing a bottleneck.

    With p_c = (p_cl / k)^2 the shared base probability cancels out of the
    rate ratio, which reduces to sqrt(8/3) * R_C / (k * f(R_L)). When
    ``capacity_pps`` is given, the base probability that fills the link is
    also reported.
    """
    r_c_mean = classic_mean_rtt(r_b_c, target, beta_c)
    f_l = rtt_independence_floor(r_b_l)
    ratio = math.sqrt(8.0 / 3.0) * r_c_mean / (k * f_l)
    p_prime = float("nan")
    rate_l = rate_c = float("nan")
    if capacity_pps is not None:
        # r_L + r_C = capacity with r_L = 2/(f k p'), r_C = sqrt(3/2)/(R_C p')
        coeff = 2.0 / (f_l * k) + math.sqrt(1.5) / r_c_mean
        p_prime = min(1.0, coeff / capacity_pps)
        rate_l = 2.0 / (f_l * k * p_prime)
        rate_c = math.sqrt(1.5) / (r_c_mean * p_prime)
    limit = creno_validity_limit(target, beta_c)
    return RatioPrediction(ratio=ratio, p_prime=p_prime, rate_l=rate_l,
                           rate_c=rate_c,
                           outside_validity=r_b_c > limit)
