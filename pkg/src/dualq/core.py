"""Shared domain types: simulated time, ECN codepoints, packets and seeded RNG.

Simulated time is an integer count of nanoseconds since simulation start,
which keeps event ordering exact at packet-serialization granularity.
"""

from __future__ import annotations

import hashlib
import random

NS_PER_S = 1_000_000_000
NS_PER_MS = 1_000_000
NS_PER_US = 1_000

MTU = 1500          # bytes; all long-flow data packets are MTU-sized
ACK_SIZE = 64       # bytes
MIN_PACKET = 64     # bytes


def s_to_ns(seconds: float) -> int:
    return int(round(seconds * NS_PER_S))


def ns_to_s(ns: int) -> float:
    return ns / NS_PER_S


class Ecn:
    """The 2-bit ECN field codepoints (wire values)."""

    NOT_ECT = 0
    ECT1 = 1
    ECT0 = 2
    CE = 3

    ALL = (NOT_ECT, ECT1, ECT0, CE)


def ecn_lsb(ecn: int) -> int:
    """Least-significant-bit view: NotECT/ECT0 -> 0, ECT1/CE -> 1."""
    return ecn & 1


def ecn_capable(ecn: int) -> bool:
    return ecn != Ecn.NOT_ECT


class Packet:
    """Unit of simulated traffic.

    ``enqueue_ts`` is stamped exactly once, when the packet is accepted by a
    queue. ``seq`` is a per-flow sequence number (-1 for connection setup).
    """

    __slots__ = ("flow_id", "size", "ecn", "enqueue_ts", "seq", "syn")

    def __init__(self, flow_id: int, size: int, ecn: int, seq: int = 0,
                 syn: bool = False):
        if not MIN_PACKET <= size <= MTU:
            raise ValueError(f"packet size {size} outside [{MIN_PACKET}, {MTU}]")
        self.flow_id = flow_id
        self.size = size
        self.ecn = ecn
        self.enqueue_ts = -1
        self.seq = seq
        self.syn = syn

    def stamp(self, now: int) -> None:
        if self.enqueue_ts >= 0:
            raise RuntimeError("packet already stamped")
        self.enqueue_ts = now

    def __repr__(self) -> str:
        return (f"Packet(flow={self.flow_id}, seq={self.seq}, "
                f"ecn={self.ecn}, size={self.size})")


def _derive_seed(seed: int, path: str) -> bytes:
    return hashlib.sha256(f"{seed}\x1f{path}".encode()).digest()


class Rng:
    """Seedable, splittable uniform source.

    Substreams are derived from (seed, path) so adding one consumer never
    perturbs another consumer's draw sequence.
    """

    __slots__ = ("seed", "path", "_r", "random")

    def __init__(self, seed: int, path: str = ""):
        self.seed = seed
        self.path = path
        self._r = random.Random(_derive_seed(seed, path))
        # bound method, exposed directly to keep the hot path cheap
        self.random = self._r.random

    def substream(self, name: str) -> "Rng":
        return Rng(self.seed, f"{self.path}/{name}")

    def uniform(self) -> float:
        """Next uniform variate in [0, 1)."""
        return self.random()

    def expovariate(self, rate: float) -> float:
        return self._r.expovariate(rate)
