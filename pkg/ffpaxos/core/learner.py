"""Learner transitions and the eager stuck-round test."""

from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Optional, Tuple

from ffpaxos.core.messages import (
    AGREEMENT_VIOLATION, DOUBLE_VOTE, Decided, Fault, P2b, Step, Value,
)
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.quorum import Family, QuorumSystem

Vote = Tuple[int, int, Value]  # (round, acceptor, value)


@dataclass(frozen=True)
class LearnerState:
    instance: int = 0
    votes: FrozenSet[Vote] = frozenset()
    decisions: FrozenSet[Tuple[int, Value]] = frozenset()

    @property
    def decided(self) -> Optional[Tuple[int, Value]]:
        """Earliest decision, if any"""
        if not self.decisions:
            return None
        return min(self.decisions)

    def votes_in(self, r: int) -> Dict[int, Value]:
        return {a: v for (rr, a, v) in self.votes if rr == r}

    @property
    def rounds(self) -> FrozenSet[int]:
        return frozenset(r for (r, _, _) in self.votes)


def on_p2b(ls: LearnerState, m: P2b, qs: QuorumSystem, rc: RoundConfig) -> Step:
    vote = (m.round, m.sender, m.value)
    if vote in ls.votes:
        if (m.round, m.value) in ls.decisions:
            return Step(ls, (Decided(m.instance, m.round, m.value),))
        return Step(ls)

    earlier = ls.votes_in(m.round).get(m.sender)
    if earlier is not None:
        fault = Fault(DOUBLE_VOTE, m.instance, m.round,
                      f"a{m.sender} voted {earlier!r} and {m.value!r}")
        return Step(ls, (), (fault,))

    ls = replace(ls, votes=ls.votes | {vote})
    family = Family.P2F if rc.is_fast(m.round) else Family.P2C
    voters = frozenset(a for (r, a, v) in ls.votes if r == m.round and v == m.value)
    key = (m.round, m.value)
    if key in ls.decisions or not qs.is_quorum(family, voters):
        return Step(ls)

    faults = ()
    others = sorted({v for (_, v) in ls.decisions if v != m.value})
    if others:
        faults = (Fault(AGREEMENT_VIOLATION, m.instance, m.round,
                        f"{m.value!r} decided after {others}"),)
    ls = replace(ls, decisions=ls.decisions | {key})
    return Step(ls, (Decided(m.instance, m.round, m.value),), faults)


def fast_round_stuck(ls: LearnerState, r: int, qs: QuorumSystem,
                     rc: Optional[RoundConfig] = None) -> bool:
    """True when no value, old or new, can still gather a fast quorum in round r"""
    if rc is not None and not rc.is_fast(r):
        return False
    if any(rr == r for (rr, _) in ls.decisions):
        return False
    votes = ls.votes_in(r)
    if not votes:
        return False
    nodes = qs.nodes
    # a fresh value may only use acceptors that have not voted yet
    if qs.is_quorum(Family.P2F, nodes - set(votes)):
        return False
    for value in set(votes.values()):
        against = {a for a, v in votes.items() if v != value}
        if qs.is_quorum(Family.P2F, nodes - against):
            return False
    return True


