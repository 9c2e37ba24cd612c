"""Congestion-control source models: Reno, CUBIC (Reno-friendly region),
a scalable DCTCP-derived control with RTT-independence, and CBR UDP timing.

Windows are real-valued segment counts with a floor of 2. Multiplicative
decreases are applied at most once per round trip; the round gating for the
classic controls lives in the flow layer (which knows sequence numbers),
while the scalable control keeps its own per-round bookkeeping.
"""

from __future__ import annotations

import math

from .core import MTU, Rng

MIN_CWND = 2.0
INITIAL_CWND = 10.0
RTT_FLOOR_S = 0.025
EWMA_GAIN = 1.0 / 16.0

# Delay-triggered slow-start exit for the classic controls, after the
# stock heuristic: leave slow start when the RTT rises by an eighth of the
# base RTT (clamped to a sane window). The scalable control needs no such
# heuristic; its slow start ends on the first mark.
HYSTART_MIN_DELAY_S = 0.004
HYSTART_MAX_DELAY_S = 0.016


def classic_ss_delay_threshold(base_rtt_s: float) -> float:
    return min(max(base_rtt_s / 8.0, HYSTART_MIN_DELAY_S),
               HYSTART_MAX_DELAY_S)


class RenoCc:
    """Classic AIMD: +1 segment per round, halve on signal. B = 1/2."""

    kind = "reno"
    beta = 0.5
    response_exponent = 0.5

    def __init__(self):
        self.cwnd = INITIAL_CWND
        self.ssthresh = math.inf
        self.in_slow_start = True

    def on_ack(self, n_acked: int, now_s: float, srtt_s: float) -> None:
        if self.in_slow_start:
            self.cwnd += n_acked
            if self.cwnd >= self.ssthresh:
                self.in_slow_start = False
        else:
            self.cwnd += n_acked / self.cwnd

    def on_signal(self, now_s: float) -> None:
        self.cwnd = max(MIN_CWND, self.cwnd * self.beta)
        self.ssthresh = self.cwnd
        self.in_slow_start = False

    def on_delay_exit(self) -> None:
        if self.in_slow_start:
            self.in_slow_start = False
            self.ssthresh = self.cwnd

    def on_timeout(self) -> None:
        self.ssthresh = max(MIN_CWND, self.cwnd / 2)
        self.cwnd = MIN_CWND
        self.in_slow_start = True


class CubicCc:
    """CUBIC with the Reno-friendly region; decrease factor 0.7.

    At the bandwidth-delay products simulated here the Reno-friendly
    estimate dominates, giving an effective response exponent near 1/2.
    """

    kind = "cubic"
    beta = 0.7
    C = 0.4
    response_exponent = 0.75  # true-cubic region

    def __init__(self):
        self.cwnd = INITIAL_CWND
        self.ssthresh = math.inf
        self.in_slow_start = True
        self.w_max = 0.0
        self.epoch_start: float | None = None
        self._k = 0.0
        self._w_est = 0.0

    def on_ack(self, n_acked: int, now_s: float, srtt_s: float) -> None:
        if self.in_slow_start:
            self.cwnd += n_acked
            if self.cwnd >= self.ssthresh:
                self.in_slow_start = False
            return
        if self.epoch_start is None:
            self.epoch_start = now_s
            self.w_max = max(self.w_max, self.cwnd)
            self._k = ((self.w_max * (1 - self.beta)) / self.C) ** (1.0 / 3.0)
            self._w_est = self.cwnd
        t = now_s - self.epoch_start
        target = self.C * (t + srtt_s - self._k) ** 3 + self.w_max
        # Reno-friendly estimate: AI of 3(1-b)/(1+b) segments per RTT
        self._w_est += 3.0 * (1 - self.beta) / (1 + self.beta) * n_acked / self.cwnd
        if target > self.cwnd:
            self.cwnd += n_acked * (target - self.cwnd) / self.cwnd
        if self._w_est > self.cwnd:
            self.cwnd = self._w_est

    def on_signal(self, now_s: float) -> None:
        self.w_max = self.cwnd
        self.cwnd = max(MIN_CWND, self.cwnd * self.beta)
        self.ssthresh = self.cwnd
        self.in_slow_start = False
        self.epoch_start = None

    def on_delay_exit(self) -> None:
        if self.in_slow_start:
            self.in_slow_start = False
            self.ssthresh = self.cwnd
            self.epoch_start = None

    def on_timeout(self) -> None:
        self.w_max = self.cwnd
        self.ssthresh = max(MIN_CWND, self.cwnd / 2)
        self.cwnd = MIN_CWND
        self.in_slow_start = True
        self.epoch_start = None


class ScalableCc:
    """DCTCP-style control with an EWMA of the per-round marked fraction and
    additive increase scaled for RTT-independence. B = 1.

    Per round (a cwnd-worth of ACKs): the EWMA absorbs the round's marked
    fraction, then the window is scaled by (1 - ewma/2). The decrease uses
    the EWMA every round rather than only on marked rounds: with random
    marking the marked-round probability is well below one at the operating
    point of two marks per virtual RTT, and triggering only on marked rounds
    would settle 15-45% above the intended steady-state rate. Scaling by the
    EWMA each round restores the balance a = (ewma/2) * W exactly, and is a
    no-op when there is no congestion since the EWMA decays to zero.
    """

    kind = "scalable"
    beta = 0.5  # loss response is classic
    response_exponent = 1.0

    def __init__(self, base_rtt_s: float):
        self.cwnd = INITIAL_CWND
        self.ssthresh = math.inf
        self.in_slow_start = True
        self.base_rtt = base_rtt_s
        self.virtual_rtt = max(base_rtt_s, RTT_FLOOR_S)
        # Start pessimistic, as the lineage does: with no marking history a
        # congestion signal is treated as severe. The EWMA decays over the
        # slow-start rounds and no window decrease is applied until slow
        # start ends, so an unmarked start-up is unaffected.
        self.ewma = 1.0
        self._acked_in_round = 0
        self._marked_in_round = 0

    @property
    def ai_per_round(self) -> float:
        return self.base_rtt / self.virtual_rtt

    def on_ack(self, n_acked: int, now_s: float, srtt_s: float,
               n_marked: int = 0) -> None:
        self._acked_in_round += n_acked
        self._marked_in_round += n_marked
        if self.in_slow_start:
            if n_marked or self.cwnd >= self.ssthresh:
                self._exit_slow_start()
            else:
                # RTT-independent ramp-up: double per virtual round, so
                # short-RTT flows take the same wall-clock time to get up
                # to speed as a 25 ms flow.
                self.cwnd += self.ai_per_round * n_acked
        else:
            self.cwnd += self.ai_per_round * n_acked / self.cwnd

    def _exit_slow_start(self) -> None:
        self.in_slow_start = False
        self.cwnd = max(MIN_CWND, self.cwnd * (1 - self.ewma / 2))
        self.ssthresh = self.cwnd
        # Re-seed the estimator from the marking actually observed in the
        # exit round; the pessimistic startup value has served its purpose
        # and would otherwise keep shrinking the window for many quiet
        # rounds after the start-up queue has drained.
        if self._acked_in_round > 0:
            self.ewma = self._marked_in_round / self._acked_in_round

    def on_delay_exit(self) -> None:
        """No delay heuristic: slow start ends on the first mark."""

    def on_round_end(self) -> None:
        # Scale by the EWMA as it stood before this round's fraction is
        # absorbed; the pre-update value is uncorrelated with the round's
        # own marks, which keeps the long-run rate on the steady-state law.
        if not self.in_slow_start:
            self.cwnd = max(MIN_CWND, self.cwnd * (1 - self.ewma / 2))
        if self._acked_in_round > 0:
            frac = self._marked_in_round / self._acked_in_round
            self.ewma += EWMA_GAIN * (frac - self.ewma)
        self._acked_in_round = 0
        self._marked_in_round = 0

    def on_signal(self, now_s: float) -> None:
        """Loss response: react as a classic flow would."""
        self.cwnd = max(MIN_CWND, self.cwnd * 0.5)
        self.ssthresh = self.cwnd
        self.in_slow_start = False

    def on_timeout(self) -> None:
        self.ssthresh = max(MIN_CWND, self.cwnd / 2)
        self.cwnd = MIN_CWND
        self.in_slow_start = True


def make_cc(kind: str, base_rtt_s: float):
    if kind == "reno":
        return RenoCc()
    if kind == "cubic":
        return CubicCc()
    if kind == "scalable":
        return ScalableCc(base_rtt_s)
    raise ValueError(f"unknown congestion control kind {kind!r}")


def pacing_rate_bps(cwnd_segments: float, srtt_s: float,
                    mss: int = MTU) -> float:
    """Even packet emission at one window per smoothed RTT."""
    if srtt_s <= 0:
        raise ValueError("srtt must be positive")
    return cwnd_segments * mss * 8.0 / srtt_s


def udp_interdeparture_s(rate_bps: float, size: int = MTU) -> float:
    """Constant-bit-rate spacing for unresponsive UDP."""
    if rate_bps <= 0:
        raise ValueError("rate must be positive")
    return size * 8.0 / rate_bps


def held_probability_rate(kind: str, p: float, base_rtt_s: float,
                          duration_s: float, seed: int = 1,
                          settle_s: float | None = None) -> float:
    """Round-driven harness: run a control against Bernoulli signals at held
    probability ``p`` with a fixed RTT and no queueing; returns the long-run
    rate in packets/second. Used to check the steady-state response laws.
    """
    cc = make_cc(kind, base_rtt_s)
    cc.in_slow_start = False
    cc.ssthresh = cc.cwnd
    rng = Rng(seed, f"held/{kind}")
    rand = rng.random
    scalable = isinstance(cc, ScalableCc)
    t = 0.0
    settle = 0.25 * duration_s if settle_s is None else settle_s
    sent = 0
    carry = 0.0
    measured_start: float | None = None
    while t < settle + duration_s:
        w = max(1, int(cc.cwnd + carry))
        carry = max(0.0, cc.cwnd + carry - w)
        marked = 0
        for _ in range(w):
            if rand() < p:
                marked += 1
        if scalable:
            cc.on_ack(w, t, base_rtt_s, n_marked=marked)
            cc.on_round_end()
        else:
            cc.on_ack(w, t, base_rtt_s)
            if marked:
                cc.on_signal(t)
        t += base_rtt_s
        if t >= settle:
            if measured_start is None:
                measured_start = t
                sent = 0
            sent += w
    return sent / (t - measured_start)
