"""
Safety monitors over traces.

Each monitor looks at the whole trace and returns one verdict; a failed
verdict carries the smallest trace slice that still shows the violation,
so running the monitor again on that slice fails the same way.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from ffpaxos.core.messages import AGREEMENT_VIOLATION, DOUBLE_VOTE
from ffpaxos.core.rounds import NONE
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.trace import Record, Trace

AGREEMENT = "agreement"
PER_ROUND_AGREEMENT = "per-round-agreement"
VALIDITY = "validity"
ACCEPTOR_MONOTONICITY = "acceptor-monotonicity"
O4_UNIQUENESS = "o4-uniqueness"

INVARIANTS = (AGREEMENT, PER_ROUND_AGREEMENT, VALIDITY, ACCEPTOR_MONOTONICITY, O4_UNIQUENESS)
SAFETY = (AGREEMENT, PER_ROUND_AGREEMENT, VALIDITY)


@dataclass(frozen=True)
class MonitorVerdict:
    invariant: str
    passed: bool
    detail: str = ""
    counterexample: Optional[Trace] = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_record(self) -> dict:
        out = {"invariant": self.invariant, "verdict": self.verdict, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = [r.line() for r in self.counterexample]
        return out


def _passed(invariant: str) -> MonitorVerdict:
    return MonitorVerdict(invariant, True)


def _failed(invariant: str, detail: str, trace: Trace, keep: List[Record]) -> MonitorVerdict:
    ids = {id(r) for r in keep}
    return MonitorVerdict(invariant, False, detail, trace.slice(lambda r: id(r) in ids))


def _decisions(trace: Trace) -> Dict[int, List[Record]]:
    out: Dict[int, List[Record]] = defaultdict(list)
    for r in trace.decisions():
        out[r["instance"]].append(r)
    return out


def check_agreement(trace: Trace) -> MonitorVerdict:
    for instance, records in sorted(_decisions(trace).items()):
        values = sorted({r["value"] for r in records})
        if len(values) > 1:
            first = {}
            for r in records:
                first.setdefault(r["value"], r)
            return _failed(AGREEMENT, f"instance {instance} decided {values}",
                           trace, list(first.values()))
    for r in trace.faults():
        if r.get("fault") == AGREEMENT_VIOLATION:
            return _failed(AGREEMENT, f"{r.node} reported {r.get('detail')}", trace, [r])
    return _passed(AGREEMENT)


def check_per_round_agreement(trace: Trace) -> MonitorVerdict:
    by_round: Dict[Tuple[int, int], Dict[str, Record]] = defaultdict(dict)
    for r in trace.decisions():
        by_round[(r["instance"], r["round"])].setdefault(r["value"], r)
    for (instance, rnd), first in sorted(by_round.items()):
        if len(first) > 1:
            return _failed(PER_ROUND_AGREEMENT,
                           f"instance {instance} round {rnd} decided {sorted(first)}",
                           trace, list(first.values()))
    return _passed(PER_ROUND_AGREEMENT)


def check_validity(trace: Trace) -> MonitorVerdict:
    proposed: Dict[int, Set[str]] = defaultdict(set)
    for r in trace.of_kind(tr.CLIENT):
        proposed[r["instance"]].add(r["value"])
    for r in trace.decisions():
        if r["value"] is None or r["value"] not in proposed[r["instance"]]:
            return _failed(VALIDITY, f"instance {r['instance']} decided unproposed {r['value']!r}",
                           trace, [r])
    return _passed(VALIDITY)


def check_acceptor_monotonicity(trace: Trace) -> MonitorVerdict:
    last: Dict[Tuple[str, int], Record] = {}
    for r in trace.of_kind(tr.STATE):
        key = (r.node, r["instance"])
        prev = last.get(key)
        if prev is not None:
            if r["rnd"] < prev["rnd"] or r["vrnd"] < prev["vrnd"]:
                return _failed(ACCEPTOR_MONOTONICITY,
                               f"{r.node} instance {r['instance']} went from "
                               f"rnd={prev['rnd']}/vrnd={prev['vrnd']} to "
                               f"rnd={r['rnd']}/vrnd={r['vrnd']}", trace, [prev, r])
        if r["vrnd"] > r["rnd"] or (r["vrnd"] == NONE) != (r["vval"] is None):
            return _failed(ACCEPTOR_MONOTONICITY, f"{r.node} holds inconsistent state", trace, [r])
        last[key] = r
    for r in trace.faults():
        if r.get("fault") == DOUBLE_VOTE:
            return _failed(ACCEPTOR_MONOTONICITY, f"{r.node} saw {r.get('detail')}", trace, [r])
    return _passed(ACCEPTOR_MONOTONICITY)


def check_o4_uniqueness(trace: Trace) -> MonitorVerdict:
    for r in trace.of_kind(tr.PICK):
        if len(r.get("o4") or []) > 1:
            return _failed(O4_UNIQUENESS, f"instance {r['instance']} round {r['round']} "
                                          f"had O4 = {r['o4']}", trace, [r])
    return _passed(O4_UNIQUENESS)


_CHECKS = {
    AGREEMENT: check_agreement,
    PER_ROUND_AGREEMENT: check_per_round_agreement,
    VALIDITY: check_validity,
    ACCEPTOR_MONOTONICITY: check_acceptor_monotonicity,
    O4_UNIQUENESS: check_o4_uniqueness,
}


def monitor(trace: Trace) -> List[MonitorVerdict]:
    return [_CHECKS[name](trace) for name in INVARIANTS]


def failures(verdicts: List[MonitorVerdict]) -> List[MonitorVerdict]:
    return [v for v in verdicts if not v.passed]


def replays(verdict: MonitorVerdict) -> bool:
    """The counterexample still violates the invariant when monitored alone"""
    if verdict.passed or verdict.counterexample is None:
        return False
    return not _CHECKS[verdict.invariant](verdict.counterexample).passed
