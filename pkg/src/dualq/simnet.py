"""Deterministic discrete-event dumbbell: senders, one bottleneck link with a
pluggable AQM, per-flow propagation delay, and the ACK return path.

All queueing happens at the bottleneck AQM; access and return paths are pure
propagation. Base RTT is split symmetrically, so a packet dequeued at time t
is delivered at t + rtt/2 and its ACK reaches the sender at t + rtt.
Receiver-side bookkeeping is evaluated at dequeue-complete time (a constant
offset before arrival), which preserves ordering.
"""

from __future__ import annotations

import math
from heapq import heappop, heappush

from .cc import (ScalableCc, classic_ss_delay_threshold, make_cc,
                 pacing_rate_bps, udp_interdeparture_s)
from .core import (ACK_SIZE, MTU, NS_PER_S, Ecn, Packet, Rng, ecn_capable,
                   s_to_ns)
from .dualpi2 import classify
from .metrics import C_QUEUE, FctRecord, MetricStore, completion_efficiency

ECN_FOR_KIND = {
    "prague": Ecn.ECT1,
    "cubic": Ecn.NOT_ECT,
    "reno": Ecn.NOT_ECT,
    "cubic_ecn": Ecn.ECT0,
    "reno_ecn": Ecn.ECT0,
}
CC_FOR_KIND = {
    "prague": "scalable",
    "cubic": "cubic",
    "cubic_ecn": "cubic",
    "reno": "reno",
    "reno_ecn": "reno",
}

MIN_RTO_NS = s_to_ns(1.0)
DUPACK_THRESHOLD = 3


class Dumbbell:
    """Single-threaded event engine around one bottleneck AQM."""

    def __init__(self, link_rate_bps: float, aqm, metrics: MetricStore,
                 tupdate_s: float | None):
        self.link_rate = link_rate_bps
        self.aqm = aqm
        self.metrics = metrics
        self.now = 0
        self._heap = []
        self._eseq = 0
        self.link_busy = False
        self.flows: dict[int, object] = {}
        self._next_flow_id = 0
        self.enqueued = 0
        self.dequeued = 0
        self.dropped = 0
        if tupdate_s is not None:
            self._tupdate_ns = s_to_ns(tupdate_s)
            self.at(self._tupdate_ns, self._pi_timer)

    # -- event plumbing ----------------------------------------------------

    def at(self, t_ns: int, fn, *args) -> None:
        self._eseq += 1
        heappush(self._heap, (t_ns, self._eseq, fn, args))

    def run(self, duration_s: float) -> None:
        end = s_to_ns(duration_s)
        heap = self._heap
        while heap:
            t, _, fn, args = heap[0]
            if t > end:
                break
            heappop(heap)
            self.now = t
            fn(*args)
        self.now = end

    def _pi_timer(self) -> None:
        self.aqm.pi_update(self.now)
        self.at(self.now + self._tupdate_ns, self._pi_timer)

    # -- flow registry -----------------------------------------------------

    def alloc_flow_id(self) -> int:
        fid = self._next_flow_id
        self._next_flow_id += 1
        return fid

    def register(self, flow) -> None:
        self.flows[flow.fid] = flow

    # -- bottleneck --------------------------------------------------------

    def submit(self, pkt: Packet) -> None:
        """Packet handed to the bottleneck by a sender (access is instant)."""
        queue = classify(pkt)
        if self.aqm.enqueue(pkt, self.now):
            self.enqueued += 1
            self.kick_link()
        else:
            self.dropped += 1
            self.metrics.record_overflow(queue, self.now, ecn_capable(pkt.ecn))

    def kick_link(self) -> None:
        if self.link_busy:
            return
        pkt, queue, marked, dropped = self.aqm.dequeue(self.now)
        for q, dp in dropped:
            self.dropped += 1
            self.metrics.record_drop(q, self.now, ecn_capable(dp.ecn))
        if pkt is None:
            return
        self.dequeued += 1
        self.metrics.record_dequeue(queue, self.now,
                                    self.now - pkt.enqueue_ts, marked)
        self.link_busy = True
        tx_ns = int(pkt.size * 8 * NS_PER_S / self.link_rate)
        self.at(self.now + tx_ns, self._tx_done, pkt)

    def _tx_done(self, pkt: Packet) -> None:
        self.link_busy = False
        self.metrics.record_delivery(pkt.flow_id, self.now, pkt.size)
        flow = self.flows.get(pkt.flow_id)
        if flow is not None:
            flow.on_packet_served(pkt)
        self.kick_link()


class UdpFlow:
    """Unresponsive constant-bit-rate source of MTU packets."""

    def __init__(self, net: Dumbbell, rate_bps: float, ecn: int,
                 start_s: float = 0.0):
        self.net = net
        self.fid = net.alloc_flow_id()
        self.ecn = ecn
        self.interval_ns = s_to_ns(udp_interdeparture_s(rate_bps))
        self.seq = 0
        net.register(self)
        net.at(s_to_ns(start_s), self._tick)

    def _tick(self) -> None:
        self.net.submit(Packet(self.fid, MTU, self.ecn, seq=self.seq))
        self.seq += 1
        self.net.at(self.net.now + self.interval_ns, self._tick)

    def on_packet_served(self, pkt: Packet) -> None:
        pass  # feedback is ignored by design


class TcpFlow:
    """Sender + receiver state for one flow through the bottleneck.

    Loss recovery is deliberately simple: retransmit on the third duplicate
    ACK or on a timeout of max(1 s, 2 * srtt); no SACK, no window inflation.
    """

    def __init__(self, net: Dumbbell, kind: str, rtt_s: float,
                 size_bytes: int | None = None, start_s: float = 0.0,
                 side: str = "", paced: bool | None = None):
        self.net = net
        self.fid = net.alloc_flow_id()
        self.kind = kind
        self.side = side
        self.ecn = ECN_FOR_KIND[kind]
        self.cc = make_cc(CC_FOR_KIND[kind], rtt_s)
        self.scalable = isinstance(self.cc, ScalableCc)
        self.paced = self.scalable if paced is None else paced
        self.rtt_ns = s_to_ns(rtt_s)
        self.base_rtt_s = rtt_s
        self.srtt_ns = self.rtt_ns
        self.rttvar_ns = self.rtt_ns // 2
        self._ss_delay_ns = (None if self.scalable
                             else s_to_ns(classic_ss_delay_threshold(rtt_s)))
        self.total_segs = (None if size_bytes is None
                           else max(1, math.ceil(size_bytes / MTU)))
        self.size_bytes = size_bytes
        self.start_ns = s_to_ns(start_s)
        self.started = False
        self.done = False
        # sender state
        self.next_seq = 0
        self.cum_ack = 0
        self.dupacks = 0
        self.recovery_end = 0
        self.round_end = 0
        self.send_times: dict[int, int] = {}
        self.retx_seqs: set[int] = set()
        self.handshake_done = False
        # receiver state
        self.rcv_next = 0
        self.rcv_ooo: set[int] = set()
        # timers
        self._rto_deadline = 0
        self._rto_pending = False
        self._pace_paused = True
        net.register(self)
        net.at(self.start_ns, self.start)

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        self.started = True
        syn_ecn = Ecn.ECT1 if self.scalable else Ecn.NOT_ECT
        pkt = Packet(self.fid, ACK_SIZE, syn_ecn, seq=-1, syn=True)
        self.send_times[-1] = self.net.now
        self._arm_rto()
        self.net.submit(pkt)

    def _finish(self) -> None:
        self.done = True
        if self.total_segs is not None:
            m = self.net.metrics
            fct_s = (self.net.now - self.start_ns) / NS_PER_S
            eff = completion_efficiency(fct_s, self.size_bytes,
                                        self.base_rtt_s, self.net.link_rate)
            m.record_fct(FctRecord(self.fid, self.size_bytes, self.start_ns,
                                   self.net.now, eff))

    # -- receiver side (evaluated at dequeue-complete time) ----------------

    def on_packet_served(self, pkt: Packet) -> None:
        net = self.net
        if pkt.syn:
            net.at(net.now + self.rtt_ns, self._on_syn_ack)
            return
        ce = pkt.ecn == Ecn.CE
        prev = self.rcv_next
        s = pkt.seq
        if s == self.rcv_next:
            self.rcv_next += 1
            while self.rcv_next in self.rcv_ooo:
                self.rcv_ooo.discard(self.rcv_next)
                self.rcv_next += 1
        elif s > self.rcv_next:
            self.rcv_ooo.add(s)
        net.at(net.now + self.rtt_ns, self._on_ack,
               self.rcv_next, self.rcv_next - prev, ce, s)

    # -- sender side -------------------------------------------------------

    def _on_syn_ack(self) -> None:
        if self.done or self.handshake_done:
            return
        self.handshake_done = True
        st = self.send_times.pop(-1, None)
        if st is not None and -1 not in self.retx_seqs:
            self._rtt_sample(self.net.now - st)
        self._arm_rto()
        if self.paced:
            self._pace_paused = True
            self._pace_tick()
        else:
            self._pump()

    def _rtt_sample(self, sample_ns: int) -> None:
        self.rttvar_ns = (3 * self.rttvar_ns
                          + abs(sample_ns - self.srtt_ns)) // 4
        self.srtt_ns = (7 * self.srtt_ns + sample_ns) // 8
        if (self._ss_delay_ns is not None and self.cc.in_slow_start
                and sample_ns > self.rtt_ns + self._ss_delay_ns):
            self.cc.on_delay_exit()

    def _on_ack(self, cum: int, newly: int, ce: bool, echo_seq: int) -> None:
        if self.done:
            return
        now = self.net.now
        st = self.send_times.pop(echo_seq, None)
        if st is not None and echo_seq not in self.retx_seqs:
            self._rtt_sample(now - st)
        self.retx_seqs.discard(echo_seq)
        now_s = now / NS_PER_S
        srtt_s = self.srtt_ns / NS_PER_S
        if cum > self.cum_ack:
            self.cum_ack = cum
            self.dupacks = 0
            self._arm_rto()
            if self.cum_ack < self.recovery_end:
                self._retransmit_holes()
        elif newly == 0 and echo_seq >= cum:
            # a stale duplicate of already-delivered data is not evidence of
            # a hole, so it must not feed the duplicate-ACK counter
            self.dupacks += 1
            if self.dupacks == DUPACK_THRESHOLD:
                self._retransmit_holes()
                self._loss_signal()
        if self.scalable:
            self.cc.on_ack(newly, now_s, srtt_s, n_marked=1 if ce else 0)
            if self.cum_ack >= self.round_end:
                self.cc.on_round_end()
                self.round_end = self.next_seq
        else:
            if newly:
                self.cc.on_ack(newly, now_s, srtt_s)
            if ce and self.ecn != Ecn.NOT_ECT:
                self._signal_once()
        if self.total_segs is not None and self.cum_ack >= self.total_segs:
            self._finish()
            return
        if self.paced:
            if self._pace_paused:
                self._pace_tick()
        else:
            self._pump()

    def _signal_once(self) -> None:
        if self.cum_ack >= self.recovery_end:
            self.cc.on_signal(self.net.now / NS_PER_S)
            self.recovery_end = self.next_seq

    def _loss_signal(self) -> None:
        self._signal_once()

    # -- transmission ------------------------------------------------------

    def _has_data(self) -> bool:
        return self.total_segs is None or self.next_seq < self.total_segs

    def _window_space(self) -> bool:
        return self.next_seq - self.cum_ack < self.cc.cwnd

    def _send_segment(self, seq: int, retx: bool = False) -> None:
        pkt = Packet(self.fid, MTU, self.ecn, seq=seq)
        if retx:
            self.retx_seqs.add(seq)
        else:
            self.send_times[seq] = self.net.now
        self.net.submit(pkt)

    def _pump(self) -> None:
        while self.handshake_done and self._has_data() and self._window_space():
            self._send_segment(self.next_seq)
            self.next_seq += 1

    def _pace_tick(self) -> None:
        if self.done or not self.handshake_done:
            return
        if not (self._has_data() and self._window_space()):
            self._pace_paused = True
            return
        self._pace_paused = False
        self._send_segment(self.next_seq)
        self.next_seq += 1
        rate = pacing_rate_bps(max(self.cc.cwnd, 1.0), self.srtt_ns / NS_PER_S)
        gap = int(MTU * 8 * NS_PER_S / rate)
        self.net.at(self.net.now + gap, self._pace_tick)

    def _retransmit(self, seq: int) -> None:
        self._send_segment(seq, retx=True)

    def _retransmit_holes(self) -> None:
        """Selective repair: resend every segment the receiver is known to
        be missing (gaps below its highest out-of-order arrival), so a
        multi-loss window recovers in about one round trip instead of one
        hole per round trip. Starts at the receiver's cumulative edge, not
        the sender's, so already-delivered segments are never resent."""
        if not self.rcv_ooo:
            return
        hi = max(self.rcv_ooo)
        for seq in range(self.rcv_next, hi):
            if seq not in self.rcv_ooo and seq not in self.retx_seqs:
                self._retransmit(seq)

    # -- retransmission timeout --------------------------------------------

    def _rto_ns(self) -> int:
        return max(MIN_RTO_NS, self.srtt_ns + 4 * self.rttvar_ns)

    def _arm_rto(self) -> None:
        self._rto_deadline = self.net.now + self._rto_ns()
        if not self._rto_pending:
            self._rto_pending = True
            self.net.at(self._rto_deadline, self._rto_check)

    def _rto_check(self) -> None:
        self._rto_pending = False
        if self.done:
            return
        if self.net.now < self._rto_deadline:
            self._rto_pending = True
            self.net.at(self._rto_deadline, self._rto_check)
            return
        # timed out: redo handshake or retransmit the first unacked segment
        self.cc.on_timeout()
        self.dupacks = 0
        self.recovery_end = self.next_seq
        if not self.handshake_done:
            syn_ecn = Ecn.ECT1 if self.scalable else Ecn.NOT_ECT
            self.retx_seqs.add(-1)
            self.net.submit(Packet(self.fid, ACK_SIZE, syn_ecn, seq=-1,
                                   syn=True))
        elif self.next_seq > self.cum_ack:
            self._retransmit(self.cum_ack)
        self._arm_rto()
