"""Dual-queue coupled AQM with a squared-output PI controller.

Scalable (ECT(1)/CE) packets are classified into a shallow low-latency queue,
everything else into a classic queue. A single PI controller, sampled on the
deeper of the two queues, produces a base probability p'; classic traffic is
signalled with p' squared, the low-latency queue with k*p' (coupled) or a
step-threshold native AQM, whichever is higher. In overload (p' >= 1/k) drop
is applied to ECN-capable packets in both queues at the classic probability.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import MTU, NS_PER_S, Ecn, Packet, Rng, ecn_capable, ecn_lsb, s_to_ns

L_QUEUE = "L"
C_QUEUE = "C"

WRR = "wrr"
TS_FIFO = "tsfifo"


class PiCore:
    """Proportional-integral controller on queueing time.

    Gains are per update, with queue delay in seconds: the increment is
    alpha * (curq - target) + beta * (curq - prevq), clamped to keep the
    base probability in [0, 1]. Shared by DualPI2 and the single-queue
    baselines so the arithmetic is implemented (and tested) once.
    """

    __slots__ = ("alpha", "beta", "target", "p_prime", "prevq")

    def __init__(self, alpha: float, beta: float, target: float):
        self.alpha = alpha
        self.beta = beta
        self.target = target
        self.p_prime = 0.0
        self.prevq = 0.0

    def update(self, curq: float) -> float:
        p = (self.p_prime + self.alpha * (curq - self.target)
             + self.beta * (curq - self.prevq))
        self.p_prime = min(1.0, max(0.0, p))
        self.prevq = curq
        return self.p_prime


@dataclass
class DualPi2Config:
    target: float = 0.015           # classic queue-delay target, s
    tupdate: float = 0.016          # PI update interval, s
    alpha: float = 0.16             # integral gain, 1/s
    beta: float = 3.2               # proportional gain, 1/s
    k: float = 2.0                  # coupling factor
    l4s_threshold: float = 0.001    # native step threshold T, s
    classic_weight: float = 0.10    # WRR share guaranteed to the C queue
    buffer_limit: int = 40000       # packets, both queues combined
    overload_drop: bool = True
    scheduler: str = WRR
    ts_shift: float = 0.015         # only for the time-shifted FIFO

    def validate(self) -> None:
        if self.target <= 0:
            raise ValueError("target must be positive")
        if not 0 < self.classic_weight < 0.5:
            raise ValueError("classic_weight must be in (0, 0.5)")
        if self.k < 1:
            raise ValueError("coupling factor must be >= 1")
        if self.l4s_threshold >= self.target:
            raise ValueError("l4s_threshold must be below target")
        if self.scheduler not in (WRR, TS_FIFO):
            raise ValueError(f"unknown scheduler {self.scheduler!r}")


class Fifo:
    __slots__ = ("q", "byte_count")

    def __init__(self):
        self.q = deque()
        self.byte_count = 0

    def push(self, pkt: Packet) -> None:
        self.q.append(pkt)
        self.byte_count += pkt.size

    def pop(self) -> Packet:
        pkt = self.q.popleft()
        self.byte_count -= pkt.size
        return pkt

    def head(self) -> Packet | None:
        return self.q[0] if self.q else None

    def __len__(self) -> int:
        return len(self.q)


def classify(pkt: Packet) -> str:
    """ECT(1) and CE go to the low-latency queue, the rest to classic."""
    return L_QUEUE if ecn_lsb(pkt.ecn) else C_QUEUE


class DualPi2:
    """One AQM instance, confined to a single simulation context.

    ``dequeue`` returns ``(packet_or_None, marked, dropped)`` where
    ``dropped`` lists (queue, packet) pairs the signalling loop discarded
    before a packet survived.
    """

    def __init__(self, cfg: DualPi2Config, link_rate_bps: float, rng: Rng):
        cfg.validate()
        self.cfg = cfg
        self.rng = rng
        self.pi = PiCore(cfg.alpha, cfg.beta, cfg.target)
        self.p_cl = 0.0
        self.p_c = 0.0
        self.lq = Fifo()
        self.cq = Fifo()
        self._wrr_credit = 0.0
        # native threshold floor of two packets' serialization time
        self.t_eff_ns = max(s_to_ns(cfg.l4s_threshold),
                            int(2 * MTU * 8 * NS_PER_S / link_rate_bps))
        self._ts_shift_ns = s_to_ns(cfg.ts_shift)

    # -- state queries -----------------------------------------------------

    @property
    def backlog_packets(self) -> int:
        return len(self.lq) + len(self.cq)

    @property
    def p_prime(self) -> float:
        return self.pi.p_prime

    def is_overloaded(self) -> bool:
        return self.pi.p_prime >= 1.0 / self.cfg.k

    def _head_sojourn_s(self, fifo: Fifo, now: int) -> float:
        head = fifo.head()
        return 0.0 if head is None else (now - head.enqueue_ts) / NS_PER_S

    # -- operations --------------------------------------------------------

    def enqueue(self, pkt: Packet, now: int) -> bool:
        """Returns False when the shared buffer is full (overflow drop)."""
        if self.backlog_packets >= self.cfg.buffer_limit:
            return False
        pkt.stamp(now)
        (self.lq if classify(pkt) == L_QUEUE else self.cq).push(pkt)
        return True

    def laqm(self, sojourn_ns: int) -> float:
        """Native L4S step AQM, inclusive at the effective threshold."""
        return 1.0 if sojourn_ns >= self.t_eff_ns else 0.0

    def schedule(self, now: int) -> str:
        l_empty = not self.lq
        c_empty = not self.cq
        if l_empty and c_empty:
            raise RuntimeError("schedule called on empty AQM")
        if l_empty:
            return C_QUEUE
        if c_empty:
            return L_QUEUE
        if self.cfg.scheduler == TS_FIFO:
            l_ts = self.lq.head().enqueue_ts - self._ts_shift_ns
            return L_QUEUE if l_ts <= self.cq.head().enqueue_ts else C_QUEUE
        # WRR via a credit counter: C accrues classic_weight per contested
        # selection and is served whenever a whole credit is available.
        self._wrr_credit += self.cfg.classic_weight
        if self._wrr_credit >= 1.0:
            self._wrr_credit -= 1.0
            return C_QUEUE
        return L_QUEUE

    def pi_update(self, now: int) -> None:
        curq = max(self._head_sojourn_s(self.cq, now),
                   self._head_sojourn_s(self.lq, now))
        p = self.pi.update(curq)
        self.p_cl = min(self.cfg.k * p, 1.0)
        self.p_c = p * p

    def dequeue(self, now: int):
        """Pop the next packet to serve, applying mark/drop signalling.

        Returns (packet_or_None, queue_id, marked, dropped).
        """
        rand = self.rng.random
        dropped = []
        while self.backlog_packets > 0:
            if self.schedule(now) == L_QUEUE:
                pkt = self.lq.pop()
                p_l = max(self.laqm(now - pkt.enqueue_ts), self.p_cl)
                if (self.cfg.overload_drop and self.is_overloaded()
                        and self.p_c > rand()):
                    dropped.append((L_QUEUE, pkt))
                    continue
                marked = False
                if p_l > rand() and ecn_capable(pkt.ecn):
                    pkt.ecn = Ecn.CE
                    marked = True
                return pkt, L_QUEUE, marked, dropped
            pkt = self.cq.pop()
            if self.p_c > rand():
                if pkt.ecn == Ecn.NOT_ECT or (
                        pkt.ecn == Ecn.ECT0 and self.cfg.overload_drop
                        and self.is_overloaded()):
                    dropped.append((C_QUEUE, pkt))
                    continue
                pkt.ecn = Ecn.CE
                return pkt, C_QUEUE, True, dropped
            return pkt, C_QUEUE, False, dropped
        return None, C_QUEUE, False, dropped
