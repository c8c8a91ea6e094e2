import pytest

from ffpaxos import wire
from ffpaxos.core.messages import ANY, Decided, P1a, P1b, P2a, P2b, Propose, from_payload, payload
from ffpaxos.core.rounds import NONE

MESSAGES = [
    P1a(3, 0),
    P1b(3, 4, NONE, None, 2),
    P1b(3, 4, 2, "c0-17", 10),
    P2a(0, 2, ANY),
    P2a(0, 1, "X"),
    Propose(12345, "valeur-é"),
    P2b(7, 9, "Y", 0),
    Decided(7, 9, "Y"),
]


@pytest.mark.parametrize("msg", MESSAGES, ids=lambda m: type(m).__name__)
def test_frames_carry_messages_unchanged(msg):
    src, dst, back = wire.decode(wire.encode("p1", "a10", msg))
    assert (src, dst) == ("p1", "a10")
    assert back == msg


def test_any_survives_the_wire():
    _, _, back = wire.decode(wire.encode("p0", "a0", P2a(0, 0, ANY)))
    assert back.value is ANY


def test_any_frame_is_smaller_than_a_value_frame():
    assert len(wire.encode("p0", "a0", P2a(0, 0, ANY))) < len(wire.encode("p0", "a0", P2a(0, 0, "X")))


@pytest.mark.parametrize("addr", ["", "a", "ax", "a-1"])
def test_malformed_addresses(addr):
    with pytest.raises(ValueError):
        wire.encode(addr, "a0", P1a(0, 0))


@pytest.mark.parametrize("msg", MESSAGES, ids=lambda m: type(m).__name__)
def test_trace_payloads_rebuild_messages(msg):
    assert from_payload(payload(msg)) == msg
