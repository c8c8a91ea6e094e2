"""
Round numbering shared by every node.

Rounds are plain integers; NONE (-1) sits below every real round and
stands for "never promised / never voted". Which rounds are fast and who
owns them is a pure function of the round number.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ffpaxos.errors import UsageError

NONE = -1


class RoundKind(Enum):
    CLASSIC = "classic"
    FAST = "fast"


CLASSIFY_RULES = ("even-fast", "odd-fast", "all-classic", "all-fast")
OWNER_RULES = ("modulo", "paired")


def round_label(r: int) -> str:
    return "NONE" if r == NONE else str(r)


@dataclass(frozen=True)
class RoundConfig:
    proposers: int = 1
    classify_rule: str = "even-fast"
    owner_rule: str = "modulo"

    def __post_init__(self):
        if isinstance(self.proposers, bool) or not isinstance(self.proposers, int) or self.proposers < 1:
            raise UsageError(f"proposers must be a positive integer, got {self.proposers!r}")
        if self.classify_rule not in CLASSIFY_RULES:
            raise UsageError(f"unknown round classification {self.classify_rule!r}, "
                             f"expected one of {', '.join(CLASSIFY_RULES)}")
        if self.owner_rule not in OWNER_RULES:
            raise UsageError(f"unknown round ownership {self.owner_rule!r}, "
                             f"expected one of {', '.join(OWNER_RULES)}")

    def classify(self, r: int) -> RoundKind:
        if r < 0:
            raise UsageError(f"round {r} has no kind")
        if self.classify_rule == "all-classic":
            return RoundKind.CLASSIC
        if self.classify_rule == "all-fast":
            return RoundKind.FAST
        even = r % 2 == 0
        fast = even if self.classify_rule == "even-fast" else not even
        return RoundKind.FAST if fast else RoundKind.CLASSIC

    def is_fast(self, r: int) -> bool:
        return self.classify(r) is RoundKind.FAST

    def owner(self, r: int) -> int:
        if r < 0:
            raise UsageError(f"round {r} has no owner")
        if self.owner_rule == "paired":
            return (r // 2) % self.proposers
        return r % self.proposers

    def next_round(self, proposer: int, after: int,
                   kind: Optional[RoundKind] = None) -> Optional[int]:
        """Smallest round > after owned by proposer (and of the given kind)"""
        # both rules repeat with period 2 * proposers
        start = max(after, NONE) + 1
        for r in range(start, start + 4 * self.proposers):
            if self.owner(r) == proposer and (kind is None or self.classify(r) is kind):
                return r
        return None

    def recovery_round(self, proposer: int, after: int) -> Optional[int]:
        """Next classic round owned by proposer, or its next round of any kind"""
        r = self.next_round(proposer, after, RoundKind.CLASSIC)
        if r is None:
            r = self.next_round(proposer, after)
        return r

    def to_dict(self) -> dict:
        return {"classify": self.classify_rule, "owner": self.owner_rule}
