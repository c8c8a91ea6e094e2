"""
Coordinator (round owner) transitions.

A coordinator runs one round at a time for one instance: phase-1 to a
quorum, a pick, then a single P2a. Fast rounds with a FREE pick send ANY
so proposers can go straight to the acceptors.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import FrozenSet, Optional

from ffpaxos.core.messages import (
    ANY, NO_RECOVERY_ROUND, P1a, P1b, P2a, Fault, Proposal, Step, Value,
)
from ffpaxos.core.pick import PickOutcome, pickable_values
from ffpaxos.core.rounds import NONE, RoundConfig, round_label
from ffpaxos.errors import ProtocolError
from ffpaxos.quorum import Family, QuorumSystem


class Phase(Enum):
    IDLE = "idle"
    PREPARING = "preparing"
    AWAITING_VALUE = "awaiting-value"
    ACCEPTING = "accepting"


@dataclass(frozen=True)
class CoordinatorState:
    me: int
    instance: int = 0
    round: int = NONE
    phase: Phase = Phase.IDLE
    promises: FrozenSet[P1b] = frozenset()
    value: Optional[Value] = None
    proposal: Optional[Proposal] = None
    pick: Optional[PickOutcome] = None
    highest_seen: int = NONE

    @classmethod
    def armed(cls, me: int, instance: int, r: int) -> "CoordinatorState":
        """Owner of fast round r with phase-1 done and ANY already sent"""
        return cls(me=me, instance=instance, round=r, phase=Phase.ACCEPTING,
                   proposal=ANY, pick=PickOutcome.free(), highest_seen=r)

    @property
    def promised_by(self) -> FrozenSet[int]:
        return frozenset(m.sender for m in self.promises)


def start_round(st: CoordinatorState, i: int, rc: RoundConfig) -> Step:
    if i == NONE or i < 0:
        raise ProtocolError(f"cannot start round {round_label(i)}")
    if rc.owner(i) != st.me:
        raise ProtocolError(f"p{st.me} does not own round {i} (owner p{rc.owner(i)})")
    if i <= st.round:
        raise ProtocolError(f"round {i} does not follow current round {st.round}")
    new = replace(st, round=i, phase=Phase.PREPARING, promises=frozenset(),
                  proposal=None, pick=None, highest_seen=max(st.highest_seen, i))
    return Step(new, (P1a(st.instance, i),))


def note_round(st: CoordinatorState, r: int) -> CoordinatorState:
    if r > st.highest_seen:
        return replace(st, highest_seen=r)
    return st


def _accept(st: CoordinatorState, value: Proposal) -> Step:
    new = replace(st, phase=Phase.ACCEPTING, proposal=value)
    return Step(new, (P2a(st.instance, st.round, value),))


def on_p1b(st: CoordinatorState, m: P1b, qs: QuorumSystem, rc: RoundConfig) -> Step:
    st = note_round(st, max(m.vrnd, m.round))
    if m.round != st.round or st.phase is not Phase.PREPARING:
        return Step(st)
    if m.sender in st.promised_by:
        return Step(st)
    promises = st.promises | {m}
    st = replace(st, promises=promises)
    senders = st.promised_by
    if not qs.is_quorum(Family.P1, senders):
        return Step(st)

    pick = pickable_values(senders, st.round, promises, qs, rc)
    st = replace(st, pick=pick)
    if pick.is_forced:
        return _accept(st, pick.value)
    if rc.is_fast(st.round):
        return _accept(st, ANY)
    if st.value is not None:
        return _accept(st, st.value)
    # any reported value came from a client, so it is a safe choice
    reported = sorted(p.vval for p in promises if p.vval is not None)
    if reported:
        return _accept(st, reported[0])
    return Step(replace(st, phase=Phase.AWAITING_VALUE))


def on_value(st: CoordinatorState, value: Value) -> Step:
    """A client value reaches the coordinator"""
    if st.value is None:
        st = replace(st, value=value)
    if st.phase is Phase.AWAITING_VALUE:
        return _accept(st, st.value)
    return Step(st)


def recover_conflict(st: CoordinatorState, failed: int, rc: RoundConfig) -> Step:
    """Start the next round this coordinator owns after a stuck fast round"""
    after = max(failed, st.round, st.highest_seen)
    r = rc.recovery_round(st.me, after)
    if r is None:
        fault = Fault(NO_RECOVERY_ROUND, st.instance, failed, f"p{st.me} owns no round after {after}")
        return Step(st, (), (fault,))
    return start_round(st, r, rc)
