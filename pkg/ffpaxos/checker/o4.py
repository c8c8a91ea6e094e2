"""
Randomized O4-uniqueness campaign.

Draws valid quorum systems (cardinality and explicit sub-families of valid
cardinality systems), random phase-1 quorums and random vote reports, then
checks that the pick's O4 set agrees with a literal enumeration of fast
quorums and never holds more than one value.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ffpaxos.core.messages import P1b
from ffpaxos.core.pick import o4_values, voters_at
from ffpaxos.core.rounds import NONE
from ffpaxos.quorum import Family, QuorumSystem, minimal_phase2, validate_fast_flexible

logger = logging.getLogger(__name__)

VALUES = ("X", "Y", "Z")
# explicit systems are only drawn up to this size
EXPLICIT_MAX_N = 5
VOTE_ROUND = 1
PICK_ROUND = 2


@dataclass(frozen=True)
class O4Failure:
    system: str
    quorum: Tuple[int, ...]
    votes: Tuple[Tuple[int, Optional[str]], ...]
    fast: Tuple[str, ...]
    brute: Tuple[str, ...]

    def to_record(self) -> dict:
        return {"system": self.system, "quorum": list(self.quorum),
                "votes": [list(v) for v in self.votes],
                "o4": list(self.fast), "enumerated": list(self.brute)}


@dataclass
class O4Summary:
    trials: int = 0
    explicit: int = 0
    max_size: int = 0
    failures: List[O4Failure] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.failures

    def to_record(self) -> dict:
        return {"trials": self.trials, "explicit": self.explicit, "max_o4": self.max_size,
                "failures": [f.to_record() for f in self.failures[:10]]}


def random_valid_system(rng: np.random.Generator, n: int, explicit: bool) -> QuorumSystem:
    q1 = int(rng.integers(1, n + 1))
    floor = minimal_phase2(n, q1)
    q2c = int(rng.integers(floor.q2c, n + 1))
    q2f = int(rng.integers(floor.q2f, n + 1))
    qs = QuorumSystem.cardinality(n, q1, q2c, q2f)
    if not explicit:
        return qs
    # any non-empty sub-family of a valid family stays valid
    families = []
    for f in Family:
        sets = qs.minimal_quorums(f)
        keep = rng.random(len(sets)) < 0.5
        keep[int(rng.integers(len(sets)))] = True
        families.append([s for s, k in zip(sets, keep) if k])
    return QuorumSystem.explicit(n, *families)


def random_phase1_quorum(rng: np.random.Generator, qs: QuorumSystem) -> frozenset:
    base = qs.minimal_quorums(Family.P1)
    q = set(base[int(rng.integers(len(base)))])
    extra = rng.random(qs.n) < 0.25
    q.update(i for i in range(qs.n) if extra[i])
    return frozenset(q)


def enumerated_o4(Q: frozenset, k: int, replies: List[P1b], qs: QuorumSystem) -> List[str]:
    """Literal definition: some fast quorum R with Q ∩ R all voting v in k"""
    fast = qs.minimal_quorums(Family.P2F)
    out = []
    for value, voters in voters_at(k, replies).items():
        if any((Q & r) <= voters for r in fast):
            out.append(value)
    return sorted(out)


def o4_trials(trials: int, max_n: int = 8, seed: int = 0) -> O4Summary:
    rng = np.random.default_rng(seed)
    summary = O4Summary()
    for _ in range(trials):
        n = int(rng.integers(1, max_n + 1))
        explicit = n <= EXPLICIT_MAX_N and rng.random() < 0.3
        qs = random_valid_system(rng, n, explicit)
        if explicit and not validate_fast_flexible(qs).valid:
            raise AssertionError(f"drew an invalid system {qs.describe()}")
        Q = random_phase1_quorum(rng, qs)
        replies = []
        votes = []
        for i in sorted(Q):
            draw = int(rng.integers(len(VALUES) + 1))
            if draw == len(VALUES):
                replies.append(P1b(0, PICK_ROUND, NONE, None, i))
                votes.append((i, None))
            else:
                replies.append(P1b(0, PICK_ROUND, VOTE_ROUND, VALUES[draw], i))
                votes.append((i, VALUES[draw]))
        fast = o4_values(Q, VOTE_ROUND, replies, qs)
        brute = enumerated_o4(Q, VOTE_ROUND, replies, qs)
        summary.trials += 1
        summary.explicit += int(explicit)
        summary.max_size = max(summary.max_size, len(fast))
        if len(fast) > 1 or fast != brute:
            summary.failures.append(O4Failure(qs.describe(), tuple(sorted(Q)), tuple(votes),
                                              tuple(fast), tuple(brute)))
    logger.info("o4 trials: %d run, largest O4 %d, %d failure(s)",
                summary.trials, summary.max_size, len(summary.failures))
    return summary
