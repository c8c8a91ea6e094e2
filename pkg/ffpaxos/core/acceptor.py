"""Acceptor transitions. All functions are pure."""

from dataclasses import dataclass, replace
from typing import Optional

from ffpaxos.core.messages import (
    ANY_ON_CLASSIC, P1a, P1b, P2a, P2b, Fault, Propose, Step, Value, is_any,
)
from ffpaxos.core.rounds import NONE, RoundConfig, round_label


@dataclass(frozen=True)
class AcceptorState:
    me: int = 0
    rnd: int = NONE
    vrnd: int = NONE
    vval: Optional[Value] = None
    open_any: int = NONE

    @classmethod
    def armed(cls, me: int, r: int) -> "AcceptorState":
        """Acceptor that already accepted ANY for fast round r"""
        return cls(me=me, rnd=r, open_any=r)

    def to_record(self) -> dict:
        return {"rnd": self.rnd, "vrnd": self.vrnd, "vval": self.vval, "open_any": self.open_any}


def on_p1a(st: AcceptorState, m: P1a) -> Step:
    if m.round <= st.rnd:
        return Step(st)
    reply = P1b(m.instance, m.round, st.vrnd, st.vval, st.me)
    return Step(replace(st, rnd=m.round, open_any=NONE), (reply,))


def _vote(st: AcceptorState, instance: int, r: int, value: Value) -> Step:
    new = replace(st, rnd=r, vrnd=r, vval=value, open_any=NONE)
    return Step(new, (P2b(instance, r, value, st.me),))


def on_p2a(st: AcceptorState, m: P2a, rc: RoundConfig) -> Step:
    if is_any(m.value) and not rc.is_fast(m.round):
        fault = Fault(ANY_ON_CLASSIC, m.instance, m.round,
                      f"a{st.me} got ANY for classic round {round_label(m.round)}")
        return Step(st, (), (fault,))
    if m.round < st.rnd or st.vrnd >= m.round:
        return Step(st)
    if is_any(m.value):
        return Step(replace(st, rnd=m.round, open_any=m.round))
    return _vote(st, m.instance, m.round, m.value)


def on_propose(st: AcceptorState, m: Propose) -> Step:
    if st.open_any == NONE or st.open_any != st.rnd or st.vrnd >= st.rnd:
        return Step(st)
    return _vote(st, m.instance, st.rnd, m.value)
