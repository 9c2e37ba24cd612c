"""Domain primitives: time units, ECN codepoints, packets, seeded RNG."""

import pytest
from hypothesis import given, strategies as st

from dualq.core import (ACK_SIZE, MIN_PACKET, MTU, NS_PER_S, Ecn, Packet,
                        Rng, ecn_capable, ecn_lsb, ns_to_s, s_to_ns)


def test_time_conversions_round_trip():
    assert s_to_ns(1.0) == NS_PER_S
    assert s_to_ns(0.015) == 15_000_000
    assert ns_to_s(s_to_ns(2.5)) == pytest.approx(2.5)


def test_ecn_codepoint_wire_values():
    assert (Ecn.NOT_ECT, Ecn.ECT1, Ecn.ECT0, Ecn.CE) == (0, 1, 2, 3)


def test_ecn_lsb_selects_low_latency_class():
    assert ecn_lsb(Ecn.NOT_ECT) == 0
    assert ecn_lsb(Ecn.ECT0) == 0
    assert ecn_lsb(Ecn.ECT1) == 1
    assert ecn_lsb(Ecn.CE) == 1


def test_ecn_capable_excludes_not_ect_only():
    assert not ecn_capable(Ecn.NOT_ECT)
    assert ecn_capable(Ecn.ECT0)
    assert ecn_capable(Ecn.ECT1)
    assert ecn_capable(Ecn.CE)


def test_packet_size_bounds():
    Packet(0, MTU, Ecn.ECT1)
    Packet(0, MIN_PACKET, Ecn.NOT_ECT)
    with pytest.raises(ValueError):
        Packet(0, MTU + 1, Ecn.ECT1)
    with pytest.raises(ValueError):
        Packet(0, MIN_PACKET - 1, Ecn.ECT1)


def test_packet_stamped_exactly_once():
    pkt = Packet(3, ACK_SIZE, Ecn.ECT1)
    assert pkt.enqueue_ts == -1
    pkt.stamp(42)
    assert pkt.enqueue_ts == 42
    with pytest.raises(RuntimeError):
        pkt.stamp(43)


def test_rng_same_seed_same_sequence():
    a = Rng(7)
    b = Rng(7)
    assert [a.random() for _ in range(20)] == [b.random() for _ in range(20)]


def test_rng_different_seeds_differ():
    assert [Rng(1).random() for _ in range(5)] != \
        [Rng(2).random() for _ in range(5)]


def test_rng_substreams_are_independent_of_sibling_creation():
    r1 = Rng(5)
    a_only = r1.substream("a")
    seq_a = [a_only.random() for _ in range(10)]

    r2 = Rng(5)
    r2.substream("b")          # creating a sibling must not perturb "a"
    a_again = r2.substream("a")
    assert [a_again.random() for _ in range(10)] == seq_a


def test_rng_substream_differs_from_parent_and_siblings():
    root = Rng(9)
    a = root.substream("a")
    b = root.substream("b")
    assert [a.random() for _ in range(5)] != [b.random() for _ in range(5)]


@given(st.integers(min_value=0, max_value=2**31), st.text(max_size=20))
def test_rng_uniform_in_unit_interval(seed, name):
    r = Rng(seed, name)
    for _ in range(5):
        assert 0.0 <= r.uniform() < 1.0
