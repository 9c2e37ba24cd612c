"""Measurement collection and reduction.

Sojourn delay is sampled per packet at dequeue time; signals, per-flow bytes
and utilization are binned per second. Long-flow reducers exclude samples
before the warm-up time; flow-completion records are never warm-up-filtered.
"""

from __future__ import annotations

import csv
import math
import warnings
from array import array
from collections import defaultdict
from dataclasses import dataclass, field

from .core import NS_PER_S, NS_PER_US

L_QUEUE = "L"
C_QUEUE = "C"


def warmup_time(rate_mbps: float, rtt_ms: float) -> float:
    """Seconds to skip before steady-state measurement starts."""
    return 5.0 + rate_mbps * rtt_ms / 100.0


def mean(samples) -> float:
    if not samples:
        raise ValueError("empty sample set")
    return sum(samples) / len(samples)


def percentile(samples, q: float) -> float:
    """Nearest-rank percentile: value at index ceil(q/100 * N) in sorted order."""
    if not samples:
        raise ValueError("empty sample set")
    if not 0 < q <= 100:
        raise ValueError("percentile must be in (0, 100]")
    ordered = sorted(samples)
    rank = max(1, math.ceil(q / 100.0 * len(ordered)))
    return ordered[rank - 1]


def normalized_rate(flow_bytes_per_s: float, capacity_bps: float,
                    n_flows: int) -> float:
    """Flow rate relative to the fair rate (capacity / number of flows)."""
    if n_flows < 1:
        raise ValueError("need at least one flow")
    fair = capacity_bps / 8.0 / n_flows
    return flow_bytes_per_s / fair


def window_estimate(rate_bytes_per_s: float, qd_avg_s: float,
                    base_rtt_s: float) -> float:
    """Window approximated at the AQM node: W = r * (qd_avg + R), in bytes."""
    return rate_bytes_per_s * (qd_avg_s + base_rtt_s)


def theoretical_fct(size_bytes: int, base_rtt_s: float,
                    capacity_bps: float) -> float:
    """Ideal completion: two RTTs of handshake/request, then line rate."""
    return 2.0 * base_rtt_s + size_bytes * 8.0 / capacity_bps


def completion_efficiency(fct_s: float, size_bytes: int, base_rtt_s: float,
                          capacity_bps: float) -> float:
    theory = theoretical_fct(size_bytes, base_rtt_s, capacity_bps)
    if fct_s < theory:
        warnings.warn(f"measured FCT {fct_s:.6f}s below theoretical "
                      f"{theory:.6f}s; clamping efficiency to 1")
        return 1.0
    return theory / fct_s


def ccdf(samples):
    """Sorted (value, survival_fraction) pairs; survival(v) = frac > v."""
    if not samples:
        raise ValueError("empty sample set")
    ordered = sorted(samples)
    n = len(ordered)
    out = []
    i = 0
    while i < n:
        v = ordered[i]
        j = i
        while j < n and ordered[j] == v:
            j += 1
        out.append((v, (n - j) / n))
        i = j
    return out


@dataclass
class FctRecord:
    flow_id: int
    size_bytes: int
    start_ns: int
    end_ns: int
    efficiency: float


@dataclass
class _SignalBin:
    packets: int = 0
    marks: int = 0
    drops: int = 0


class MetricStore:
    """Single-writer accumulator for one simulation run."""

    def __init__(self, capacity_bps: float, warmup_s: float):
        self.capacity_bps = capacity_bps
        self.warmup_ns = int(warmup_s * NS_PER_S)
        # parallel arrays per queue: dequeue time and sojourn, both ns
        self.sojourn_t = {L_QUEUE: array("q"), C_QUEUE: array("q")}
        self.sojourn = {L_QUEUE: array("q"), C_QUEUE: array("q")}
        self.signals = {L_QUEUE: defaultdict(_SignalBin),
                        C_QUEUE: defaultdict(_SignalBin)}
        self.flow_bytes = defaultdict(lambda: defaultdict(int))
        self.delivered_bytes = defaultdict(int)  # per-second, all traffic
        self.fct_records: list[FctRecord] = []
        self.overflow_drops = 0
        self.ecn_capable_drops = 0  # drops of ECT/CE packets (any queue)

    # -- recording ---------------------------------------------------------

    def record_dequeue(self, queue: str, now: int, sojourn_ns: int,
                       marked: bool) -> None:
        self.sojourn_t[queue].append(now)
        self.sojourn[queue].append(sojourn_ns)
        b = self.signals[queue][now // NS_PER_S]
        b.packets += 1
        if marked:
            b.marks += 1

    def record_drop(self, queue: str, now: int, ecn_capable: bool) -> None:
        b = self.signals[queue][now // NS_PER_S]
        b.packets += 1
        b.drops += 1
        if ecn_capable:
            self.ecn_capable_drops += 1

    def record_overflow(self, queue: str, now: int, ecn_capable: bool) -> None:
        self.overflow_drops += 1
        self.record_drop(queue, now, ecn_capable)

    def record_delivery(self, flow_id: int, now: int, nbytes: int) -> None:
        sec = now // NS_PER_S
        self.flow_bytes[flow_id][sec] += nbytes
        self.delivered_bytes[sec] += nbytes

    def record_fct(self, rec: FctRecord) -> None:
        self.fct_records.append(rec)

    # -- reducers ----------------------------------------------------------

    def sojourns_after_warmup(self, queue: str):
        ts = self.sojourn_t[queue]
        so = self.sojourn[queue]
        w = self.warmup_ns
        return [so[i] for i in range(len(so)) if ts[i] >= w]

    def signal_probability(self, queue: str, first_s: int | None = None):
        """Whole-run mark and drop fractions of all packets that reached the
        queue (denominator includes unsignalled packets)."""
        first = self.warmup_ns // NS_PER_S if first_s is None else first_s
        pkts = marks = drops = 0
        for sec, b in self.signals[queue].items():
            if sec >= first:
                pkts += b.packets
                marks += b.marks
                drops += b.drops
        if pkts == 0:
            return None
        return marks / pkts, drops / pkts

    def per_second_signal_rates(self, queue: str):
        """List of (second, p_mark, p_drop) for post-warmup seconds."""
        first = self.warmup_ns // NS_PER_S
        out = []
        for sec in sorted(self.signals[queue]):
            b = self.signals[queue][sec]
            if sec >= first and b.packets > 0:
                out.append((sec, b.marks / b.packets, b.drops / b.packets))
        return out

    def utilization_samples(self, duration_s: int):
        first = self.warmup_ns // NS_PER_S
        return [min(1.0 + 8 * 1500 / self.capacity_bps,
                    self.delivered_bytes.get(s, 0) * 8 / self.capacity_bps)
                for s in range(first, duration_s)]

    def flow_rate_bytes_per_s(self, flow_id: int, duration_s: int) -> float:
        first = self.warmup_ns // NS_PER_S
        span = duration_s - first
        if span <= 0:
            raise ValueError("run shorter than warm-up")
        bins = self.flow_bytes.get(flow_id, {})
        return sum(v for s, v in bins.items() if s >= first) / span

    def mean_sojourn_in_window(self, queue: str, t0_s: float, t1_s: float):
        t0 = int(t0_s * NS_PER_S)
        t1 = int(t1_s * NS_PER_S)
        ts = self.sojourn_t[queue]
        so = self.sojourn[queue]
        vals = [so[i] for i in range(len(so)) if t0 <= ts[i] < t1]
        return mean(vals) if vals else None

    # -- exports -----------------------------------------------------------

    def write_qdelay_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["queue", "t_us", "sojourn_us"])
            for q in (L_QUEUE, C_QUEUE):
                ts = self.sojourn_t[q]
                so = self.sojourn[q]
                for i in range(len(so)):
                    w.writerow([q, ts[i] // NS_PER_US, so[i] // NS_PER_US])

    def write_flows_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["flow_id", "second", "bytes"])
            for fid in sorted(self.flow_bytes):
                for sec in sorted(self.flow_bytes[fid]):
                    w.writerow([fid, sec, self.flow_bytes[fid][sec]])

    def write_signals_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["second", "queue", "packets", "marks", "drops"])
            secs = set()
            for q in (L_QUEUE, C_QUEUE):
                secs.update(self.signals[q])
            for sec in sorted(secs):
                for q in (L_QUEUE, C_QUEUE):
                    b = self.signals[q].get(sec)
                    if b is not None:
                        w.writerow([sec, q, b.packets, b.marks, b.drops])

    def write_fct_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["flow_id", "size_bytes", "start_us", "fct_us",
                        "efficiency"])
            for r in self.fct_records:
                w.writerow([r.flow_id, r.size_bytes, r.start_ns // NS_PER_US,
                            (r.end_ns - r.start_ns) // NS_PER_US,
                            f"{r.efficiency:.6f}"])


def write_summary_csv(path, key: str, rows) -> None:
    """rows: iterable of (metric, mean, p1, p25, p99); missing stats as ''."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["scenario", "metric", "mean", "p1", "p25", "p99"])
        for metric, m, p1, p25, p99 in rows:
            fmt = lambda v: "" if v is None else f"{v:.6f}"
            w.writerow([key, metric, fmt(m), fmt(p1), fmt(p25), fmt(p99)])
