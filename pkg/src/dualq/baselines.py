"""Comparison AQMs: single-queue PI-squared, a simplified PIE, and tail-drop.

All reuse the PI core from the dual-queue implementation so the controller
arithmetic has a single code path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import NS_PER_S, Ecn, Packet, Rng, ecn_capable, s_to_ns
from .dualpi2 import Fifo, PiCore


@dataclass
class Pi2SingleConfig:
    target: float = 0.015
    tupdate: float = 0.016
    alpha: float = 0.16
    beta: float = 3.2
    buffer_limit: int = 40000


class Pi2Single:
    """Single queue; every departing packet signalled with probability p'^2,
    marked when ECN-capable, dropped otherwise."""

    def __init__(self, cfg: Pi2SingleConfig, link_rate_bps: float, rng: Rng):
        self.cfg = cfg
        self.rng = rng
        self.pi = PiCore(cfg.alpha, cfg.beta, cfg.target)
        self.q = Fifo()

    @property
    def backlog_packets(self) -> int:
        return len(self.q)

    def enqueue(self, pkt: Packet, now: int) -> bool:
        if len(self.q) >= self.cfg.buffer_limit:
            return False
        pkt.stamp(now)
        self.q.push(pkt)
        return True

    def pi_update(self, now: int) -> None:
        head = self.q.head()
        curq = 0.0 if head is None else (now - head.enqueue_ts) / NS_PER_S
        self.pi.update(curq)

    def dequeue(self, now: int):
        dropped = []
        p = self.pi.p_prime ** 2
        while self.q:
            pkt = self.q.pop()
            if p > self.rng.random():
                if ecn_capable(pkt.ecn):
                    pkt.ecn = Ecn.CE
                    return pkt, "C", True, dropped
                dropped.append(("C", pkt))
                continue
            return pkt, "C", False, dropped
        return None, "C", False, dropped


@dataclass
class PieConfig:
    target: float = 0.015
    tupdate: float = 0.016
    alpha: float = 1.0 / 16.0       # as configured; scaled internally
    beta: float = 10.0 / 16.0
    burst_allowance: float = 0.100
    ecn_drop_threshold: float = 0.25
    buffer_limit: int = 40000

    # The published configuration values are scaled internally so the
    # effective per-update gains equal the dual-queue AQM's (0.16, 3.2).
    GAIN_SCALE_ALPHA = 0.16 / (1.0 / 16.0)
    GAIN_SCALE_BETA = 3.2 / (10.0 / 16.0)


class Pie:
    """Simplified PIE: PI controller applied directly (not squared), drop
    instead of mark above the ECN drop threshold, and a burst allowance that
    suppresses signals for a window after the queue leaves idle. No
    derandomization or gain auto-tuning."""

    def __init__(self, cfg: PieConfig, link_rate_bps: float, rng: Rng):
        self.cfg = cfg
        self.rng = rng
        self.pi = PiCore(cfg.alpha * PieConfig.GAIN_SCALE_ALPHA,
                         cfg.beta * PieConfig.GAIN_SCALE_BETA, cfg.target)
        self.q = Fifo()
        self._burst_end_ns = -1

    @property
    def backlog_packets(self) -> int:
        return len(self.q)

    def enqueue(self, pkt: Packet, now: int) -> bool:
        if len(self.q) >= self.cfg.buffer_limit:
            return False
        if not self.q:
            # queue transitions from idle: signal-free burst window
            self._burst_end_ns = now + s_to_ns(self.cfg.burst_allowance)
        pkt.stamp(now)
        self.q.push(pkt)
        return True

    def pi_update(self, now: int) -> None:
        head = self.q.head()
        curq = 0.0 if head is None else (now - head.enqueue_ts) / NS_PER_S
        self.pi.update(curq)

    def dequeue(self, now: int):
        dropped = []
        p = self.pi.p_prime
        in_burst = now < self._burst_end_ns
        while self.q:
            pkt = self.q.pop()
            if not in_burst and p > self.rng.random():
                if ecn_capable(pkt.ecn) and p < self.cfg.ecn_drop_threshold:
                    pkt.ecn = Ecn.CE
                    return pkt, "C", True, dropped
                dropped.append(("C", pkt))
                continue
            return pkt, "C", False, dropped
        return None, "C", False, dropped


@dataclass
class TailDropConfig:
    buffer_limit: int = 40000


class TailDrop:
    """Plain FIFO with a packet limit; sanity baseline."""

    def __init__(self, cfg: TailDropConfig, link_rate_bps: float, rng: Rng):
        self.cfg = cfg
        self.q = Fifo()

    @property
    def backlog_packets(self) -> int:
        return len(self.q)

    def enqueue(self, pkt: Packet, now: int) -> bool:
        if len(self.q) >= self.cfg.buffer_limit:
            return False
        pkt.stamp(now)
        self.q.push(pkt)
        return True

    def pi_update(self, now: int) -> None:
        pass

    def dequeue(self, now: int):
        if self.q:
            return self.q.pop(), "C", False, []
        return None, "C", False, []
