"""
Link behaviour: seeded draws and the per-message delivery schedule.

Every send gets its own stream, keyed by (seed, src, dst, instance,
message kind, ordinal) where ordinal counts earlier sends of that kind on
that link for that instance. Each purpose reads a fixed position of the
stream, so runs that differ only in quorum sizes see the same delays for
the same messages.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from ffpaxos.core.messages import Dest, Message, destination, kind_of
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.simnet.model import LinkModel

# positions in a send stream
DROP, DUP, DELAY, DUP_DELAY = range(4)
_WIDTH = 4

ROLES = {"a": 0, "p": 1, "l": 2}
KINDS = {"P1a": 1, "P1b": 2, "P2a": 3, "Propose": 4, "P2b": 5, "Decided": 6}

# purposes outside message sends
SEND_STREAM = 1
TIMER_STREAM = 2
PARTITION_STREAM = 3

_SCALE = 2.0 ** -53


def address_key(addr: str) -> Tuple[int, int]:
    return ROLES[addr[0]], int(addr[1:])


def uniforms(seed: int, key: Tuple[int, ...], count: int) -> np.ndarray:
    """count uniforms in [0, 1) from the stream (seed, key)"""
    state = np.random.SeedSequence(seed, spawn_key=key).generate_state(count, np.uint64)
    return (state >> np.uint64(11)).astype(np.float64) * _SCALE


class Draw:
    """Fixed-position uniforms for one message send"""

    def __init__(self, values):
        self.values = values

    @classmethod
    def for_send(cls, seed: int, src: str, dst: str, msg: Message, ordinal: int) -> "Draw":
        key = (SEND_STREAM, *address_key(src), *address_key(dst),
               msg.instance, KINDS[kind_of(msg)], ordinal)
        return cls(uniforms(seed, key, _WIDTH))

    @classmethod
    def from_generator(cls, rng: np.random.Generator) -> "Draw":
        return cls(rng.random(_WIDTH))

    def __getitem__(self, purpose: int) -> float:
        return float(self.values[purpose])


class Outcome(Enum):
    DELIVER = "deliver"
    DROP = "drop"
    DUPLICATE = "duplicate"


@dataclass(frozen=True)
class Schedule:
    outcome: Outcome
    delays: Tuple[float, ...] = ()


def deliver_schedule(link: LinkModel, draw: Draw) -> Schedule:
    if draw[DROP] < link.drop:
        return Schedule(Outcome.DROP)
    first = link.delay.quantile(draw[DELAY])
    if draw[DUP] < link.dup:
        return Schedule(Outcome.DUPLICATE, (first, link.delay.quantile(draw[DUP_DELAY])))
    return Schedule(Outcome.DELIVER, (first,))


class Router:
    """Resolves a message's logical destination to node addresses"""

    def __init__(self, acceptors: List[str], proposers: List[str], learners: List[str],
                 rounds: RoundConfig):
        self.acceptors = acceptors
        self.proposers = proposers
        self.learners = learners
        self.rounds = rounds
        self._ordinals: Dict[Tuple[str, str, int, str], int] = {}

    def targets(self, msg: Message) -> List[str]:
        dest = destination(msg)
        if dest is Dest.ACCEPTORS:
            return self.acceptors
        if dest is Dest.OWNER:
            return [f"p{self.rounds.owner(msg.round)}"]
        if dest is Dest.LEARNERS:
            return self.learners + self.proposers
        return self.proposers

    def ordinal(self, src: str, dst: str, msg: Message) -> int:
        key = (src, dst, msg.instance, kind_of(msg))
        n = self._ordinals.get(key, 0)
        self._ordinals[key] = n + 1
        return n
