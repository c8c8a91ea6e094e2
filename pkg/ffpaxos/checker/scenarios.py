"""
Scripted counterexamples on deliberately invalid quorum systems.

Each scenario replays a hand-built delivery schedule through the core
transitions and records a trace in the simulator's format, so the same
monitors that watch simulations flag the two decided values.
"""

import logging
from typing import Callable, Dict, List, Optional

from ffpaxos.core import acceptor, coordinator, learner
from ffpaxos.core.acceptor import AcceptorState
from ffpaxos.core.coordinator import CoordinatorState, Phase
from ffpaxos.core.learner import LearnerState
from ffpaxos.core.messages import Message, P1a, P1b, P2a, P2b, Propose, Step, payload
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import UsageError
from ffpaxos.quorum import QuorumSystem, validate_fast_flexible
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.trace import Trace

logger = logging.getLogger(__name__)


class Script:
    """Drives core transitions by hand and records what happens"""

    def __init__(self, name: str, quorums: QuorumSystem, rounds: RoundConfig,
                 armed_round: Optional[int] = None):
        self.quorums = quorums
        self.rounds = rounds
        self.trace = Trace(0, f"scenario:{name}")
        self.time = 0.0
        self.acceptors: List[AcceptorState] = [
            AcceptorState.armed(i, armed_round) if armed_round is not None else AcceptorState(me=i)
            for i in range(quorums.n)
        ]
        self.coords: List[CoordinatorState] = []
        for p in range(rounds.proposers):
            if armed_round is not None and rounds.owner(armed_round) == p:
                self.coords.append(CoordinatorState.armed(p, 0, armed_round))
            else:
                self.coords.append(CoordinatorState(me=p, instance=0))
        self.learner = LearnerState(0)
        for address in ([f"a{i}" for i in range(quorums.n)] +
                        [f"p{p}" for p in range(rounds.proposers)] + ["l0"]):
            self.trace.add(0.0, address, tr.BOOT, {"armed": armed_round, "scenario": name})

    def _tick(self) -> None:
        self.time += 1.0

    def _record(self, node: str, kind: str, data: dict) -> None:
        self.trace.add(self.time, node, kind, data)

    def _faults(self, node: str, step: Step) -> None:
        for fault in step.faults:
            self._record(node, tr.FAULT, fault.to_record())

    def client(self, p: int, value: str) -> None:
        self._tick()
        self._record(f"p{p}", tr.CLIENT, {"instance": 0, "value": value, "client": p, "racing": True})
        step = coordinator.on_value(self.coords[p], value)
        self.coords[p] = step.state

    def start(self, p: int, r: int) -> P1a:
        self._tick()
        step = coordinator.start_round(self.coords[p], r, self.rounds)
        self.coords[p] = step.state
        return step.messages[0]

    def to_acceptor(self, i: int, msg: Message) -> List[Message]:
        self._tick()
        node = f"a{i}"
        self._record(node, tr.DELIVER, {"from": "script", **payload(msg)})
        st = self.acceptors[i]
        if isinstance(msg, P1a):
            step = acceptor.on_p1a(st, msg)
        elif isinstance(msg, P2a):
            step = acceptor.on_p2a(st, msg, self.rounds)
        else:
            step = acceptor.on_propose(st, msg)
        if step.state != st:
            self.acceptors[i] = step.state
            self._record(node, tr.STATE, {"instance": 0, **step.state.to_record()})
        self._faults(node, step)
        return list(step.messages)

    def to_coordinator(self, p: int, msg: P1b) -> List[Message]:
        self._tick()
        node = f"p{p}"
        self._record(node, tr.DELIVER, {"from": f"a{msg.sender}", **payload(msg)})
        before = self.coords[p]
        step = coordinator.on_p1b(before, msg, self.quorums, self.rounds)
        self.coords[p] = step.state
        c = step.state
        if before.phase is Phase.PREPARING and c.phase is not Phase.PREPARING:
            self._record(node, tr.PICK, {
                "instance": 0, "round": c.round, "quorum": sorted(c.promised_by),
                "outcome": c.pick.kind.value, "k": c.pick.k, "o4": list(c.pick.o4),
            })
        self._faults(node, step)
        return list(step.messages)

    def to_learner(self, msg: P2b) -> None:
        self._tick()
        self._record("l0", tr.DELIVER, {"from": f"a{msg.sender}", **payload(msg)})
        before = self.learner
        step = learner.on_p2b(before, msg, self.quorums, self.rounds)
        self.learner = step.state
        self._faults("l0", step)
        for r, value in sorted(step.state.decisions - before.decisions):
            self._record("l0", tr.DECIDE, {"instance": 0, "round": r, "value": value, "via": "quorum"})

    def phase1(self, p: int, r: int, members: List[int]) -> List[Message]:
        p1a = self.start(p, r)
        out: List[Message] = []
        for i in members:
            for reply in self.to_acceptor(i, p1a):
                out = self.to_coordinator(p, reply) or out
        return out

    def phase2(self, msg: Message, members: List[int]) -> None:
        for i in members:
            for vote in self.to_acceptor(i, msg):
                self.to_learner(vote)


def broken_classic_intersection() -> Trace:
    """Disjoint classic quorums: X decided on {a0,a1}, Y on {a2,a3}"""
    qs = QuorumSystem.cardinality(4, 2, 2, 4)
    rc = RoundConfig(proposers=2, classify_rule="all-classic")
    s = Script("broken-classic-intersection", qs, rc)
    s.client(0, "X")
    s.client(1, "Y")
    (p2a,) = s.phase1(0, 0, [0, 1])
    s.phase2(p2a, [0, 1])
    (p2a,) = s.phase1(1, 1, [2, 3])
    s.phase2(p2a, [2, 3])
    return s.trace


def broken_fast_intersection() -> Trace:
    """
    Fast round 0 decides Y on {a0,a1,a2} while a3,a4 vote X. The classic
    round-1 phase-1 quorum {a0,a3,a4} sees both values as possibly chosen
    and the pick lands on X, which round 1 then decides.
    """
    qs = QuorumSystem.cardinality(5, 3, 3, 3)
    rc = RoundConfig(proposers=2, classify_rule="even-fast")
    s = Script("broken-fast-intersection", qs, rc, armed_round=0)
    s.client(0, "Y")
    s.phase2(Propose(0, "Y"), [0, 1, 2])
    s.client(0, "X")
    s.phase2(Propose(0, "X"), [3, 4])
    (p2a,) = s.phase1(1, 1, [0, 3, 4])
    s.phase2(p2a, [0, 3, 4])
    return s.trace


CATALOG: Dict[str, Callable[[], Trace]] = {
    "broken-classic-intersection": broken_classic_intersection,
    "broken-fast-intersection": broken_fast_intersection,
}

SYSTEMS: Dict[str, QuorumSystem] = {
    "broken-classic-intersection": QuorumSystem.cardinality(4, 2, 2, 4),
    "broken-fast-intersection": QuorumSystem.cardinality(5, 3, 3, 3),
}


def scripted_counterexample(name: str, quorums: Optional[QuorumSystem] = None) -> Trace:
    if name not in CATALOG:
        raise UsageError(f"unknown scenario {name!r}, expected one of {', '.join(sorted(CATALOG))}")
    if quorums is not None:
        if validate_fast_flexible(quorums).valid:
            raise UsageError(f"scenario {name} needs an invalid quorum system; "
                             f"{quorums.describe()} is valid")
        if quorums != SYSTEMS[name]:
            raise UsageError(f"scenario {name} is scripted for {SYSTEMS[name].describe()}, "
                             f"not {quorums.describe()}")
    logger.info("replaying scenario %s", name)
    return CATALOG[name]()
