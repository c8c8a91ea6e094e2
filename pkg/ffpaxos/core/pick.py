"""
Value selection after phase-1.

Given the phase-1 replies of a quorum Q for round i, decide whether some
value may already have been chosen in an earlier round (FORCED) or whether
the coordinator is free to propose anything (FREE).

For a fast round k the candidate set is

    O4 = { v : some fast quorum R has every member of Q ∩ R voting v in k }

A fast quorum R with Q ∩ R ⊆ voters(v) exists exactly when the nodes
outside Q - voters(v) still contain a fast quorum, which is what
o4_values tests.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from ffpaxos.core.messages import P1b, Value
from ffpaxos.core.rounds import NONE, RoundConfig, round_label
from ffpaxos.errors import ProtocolError
from ffpaxos.quorum import Family, QuorumSystem


class PickKind(Enum):
    FORCED = "forced"
    FREE = "free"


@dataclass(frozen=True)
class PickOutcome:
    kind: PickKind
    value: Optional[Value] = None
    k: int = NONE
    o4: Tuple[Value, ...] = ()

    @classmethod
    def forced(cls, value: Value, k: int, o4: Tuple[Value, ...] = ()) -> "PickOutcome":
        return cls(PickKind.FORCED, value, k, o4)

    @classmethod
    def free(cls, k: int = NONE) -> "PickOutcome":
        return cls(PickKind.FREE, None, k)

    @property
    def is_forced(self) -> bool:
        return self.kind is PickKind.FORCED

    def __str__(self):
        return f"FORCED({self.value})" if self.is_forced else "FREE"


def _replies_by_sender(Q: FrozenSet[int], i: int, M: Iterable[P1b]) -> Dict[int, P1b]:
    replies: Dict[int, P1b] = {}
    for m in M:
        if m.round != i:
            raise ProtocolError(f"P1b from a{m.sender} is for round {round_label(m.round)}, not {i}")
        if m.vrnd >= i:
            raise ProtocolError(f"P1b from a{m.sender} reports vrnd {m.vrnd} >= {i}")
        if (m.vrnd == NONE) != (m.vval is None):
            raise ProtocolError(f"P1b from a{m.sender} has vrnd {round_label(m.vrnd)} "
                                f"with value {m.vval!r}")
        seen = replies.get(m.sender)
        if seen is not None and seen != m:
            raise ProtocolError(f"conflicting P1b replies from a{m.sender}")
        replies[m.sender] = m
    missing = sorted(Q - set(replies))
    if missing:
        raise ProtocolError(f"no P1b from quorum members {missing}")
    extra = sorted(set(replies) - Q)
    if extra:
        raise ProtocolError(f"P1b from {extra} outside the quorum")
    return replies


def voters_at(k: int, M: Iterable[P1b]) -> Dict[Value, Set[int]]:
    voters: Dict[Value, Set[int]] = {}
    for m in M:
        if m.vrnd == k and k != NONE:
            voters.setdefault(m.vval, set()).add(m.sender)
    return voters


def o4_values(Q: Iterable[int], k: int, M: Iterable[P1b], qs: QuorumSystem) -> List[Value]:
    """Values that may have been chosen in fast round k, sorted"""
    Q = frozenset(Q)
    M = list(M)
    out = []
    for value, voters in voters_at(k, M).items():
        if qs.is_quorum(Family.P2F, qs.nodes - (Q - voters)):
            out.append(value)
    return sorted(out)


def pickable_values(Q: Iterable[int], i: int, M: Iterable[P1b],
                    qs: QuorumSystem, rc: RoundConfig) -> PickOutcome:
    Q = frozenset(Q)
    if i < 0:
        raise ProtocolError("cannot pick a value for round NONE")
    if not qs.is_quorum(Family.P1, Q):
        raise ProtocolError(f"{sorted(Q)} is not a phase-1 quorum")
    replies = _replies_by_sender(Q, i, M)

    k = max(m.vrnd for m in replies.values())
    if k == NONE:
        return PickOutcome.free()

    if not rc.is_fast(k):
        values = sorted({m.vval for m in replies.values() if m.vrnd == k})
        if len(values) != 1:
            raise ProtocolError(f"classic round {k} reported with values {values}")
        return PickOutcome.forced(values[0], k)

    o4 = tuple(o4_values(Q, k, replies.values(), qs))
    if o4:
        # only an invalid system can leave several candidates
        return PickOutcome.forced(o4[0], k, o4)
    return PickOutcome.free(k)


def chosen(votes: Iterable[Tuple[int, int, Value]], qs: QuorumSystem,
           rc: RoundConfig) -> FrozenSet[Tuple[int, Value]]:
    """(round, value) pairs whose voters form a phase-2 quorum of the round's kind"""
    by_key: Dict[Tuple[int, Value], Set[int]] = {}
    for r, acceptor, value in votes:
        by_key.setdefault((r, value), set()).add(acceptor)
    out = set()
    for (r, value), voters in by_key.items():
        family = Family.P2F if rc.is_fast(r) else Family.P2C
        if qs.is_quorum(family, voters):
            out.add((r, value))
    return frozenset(out)
