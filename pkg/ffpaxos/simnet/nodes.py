"""
Simulated nodes wrapping the pure core transitions.

Nodes never touch the clock or the network directly; they talk to the
engine through a small context (send, set_timer, record).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Set, Tuple

from ffpaxos.core import acceptor, coordinator, learner
from ffpaxos.core.acceptor import AcceptorState
from ffpaxos.core.coordinator import CoordinatorState, Phase
from ffpaxos.core.learner import LearnerState, fast_round_stuck
from ffpaxos.core.messages import (
    Decided, Message, P1a, P1b, P2a, P2b, Propose, Step, is_any,
)
from ffpaxos.core.rounds import NONE, RoundConfig
from ffpaxos.quorum import QuorumSystem
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.model import Timeouts
from ffpaxos.simnet.network import TIMER_STREAM, uniforms

# retry timeouts grow up to this factor
MAX_BACKOFF = 8


class Context(Protocol):
    now: float

    def send(self, src: str, msg: Message) -> None: ...

    def set_timer(self, node: str, instance: int, generation: int, delay: float) -> None: ...

    def record(self, node: str, kind: str, payload: dict) -> None: ...


def _apply(ctx: Context, node: str, step: Step) -> None:
    for fault in step.faults:
        ctx.record(node, tr.FAULT, fault.to_record())
    for msg in step.messages:
        ctx.send(node, msg)


# ============================================================================
# Acceptor
# ============================================================================

class AcceptorNode:
    role = "acceptor"

    def __init__(self, index: int, rounds: RoundConfig, armed_round: Optional[int] = None):
        self.index = index
        self.address = f"a{index}"
        self.rounds = rounds
        self.armed_round = armed_round
        self.states: Dict[int, AcceptorState] = {}

    def state(self, instance: int) -> AcceptorState:
        st = self.states.get(instance)
        if st is None:
            if self.armed_round is not None:
                st = AcceptorState.armed(self.index, self.armed_round)
            else:
                st = AcceptorState(me=self.index)
        return st

    def handle(self, msg: Message, ctx: Context) -> None:
        st = self.state(msg.instance)
        if isinstance(msg, P1a):
            step = acceptor.on_p1a(st, msg)
        elif isinstance(msg, P2a):
            step = acceptor.on_p2a(st, msg, self.rounds)
        elif isinstance(msg, Propose):
            step = acceptor.on_propose(st, msg)
        else:
            return
        if step.state != st:
            self.states[msg.instance] = step.state
            ctx.record(self.address, tr.STATE, {"instance": msg.instance, **step.state.to_record()})
        _apply(ctx, self.address, step)


# ============================================================================
# Learner
# ============================================================================

class LearnerNode:
    role = "learner"

    def __init__(self, index: int, quorums: QuorumSystem, rounds: RoundConfig):
        self.index = index
        self.address = f"l{index}"
        self.quorums = quorums
        self.rounds = rounds
        self.states: Dict[int, LearnerState] = {}

    def handle(self, msg: Message, ctx: Context) -> None:
        if not isinstance(msg, P2b):
            return
        ls = self.states.get(msg.instance) or LearnerState(msg.instance)
        step = learner.on_p2b(ls, msg, self.quorums, self.rounds)
        self.states[msg.instance] = step.state
        for fault in step.faults:
            ctx.record(self.address, tr.FAULT, fault.to_record())
        fresh = step.state.decisions - ls.decisions
        for r, value in sorted(fresh):
            ctx.record(self.address, tr.DECIDE,
                       {"instance": msg.instance, "round": r, "value": value, "via": "quorum"})
            ctx.send(self.address, Decided(msg.instance, r, value))


# ============================================================================
# Proposer
# ============================================================================

@dataclass
class Slot:
    """Proposer-side state of one instance"""
    coord: CoordinatorState
    learner: LearnerState
    fast_round: int = NONE           # fast round known open for direct proposals
    decided: Optional[Tuple[int, str]] = None
    generation: int = 0
    timer_armed: bool = False
    attempts: int = 0
    recovered: Set[int] = field(default_factory=set)
    submitted: List[str] = field(default_factory=list)


class ProposerNode:
    """Client-facing proposer: coordinator for its rounds plus an embedded learner"""
    role = "proposer"

    def __init__(self, index: int, quorums: QuorumSystem, rounds: RoundConfig,
                 timeouts: Timeouts, seed: int, armed_round: Optional[int] = None):
        self.index = index
        self.address = f"p{index}"
        self.quorums = quorums
        self.rounds = rounds
        self.timeouts = timeouts
        self.seed = seed
        self.armed_round = armed_round
        self.slots: Dict[int, Slot] = {}

    def slot(self, instance: int) -> Slot:
        s = self.slots.get(instance)
        if s is not None:
            return s
        armed = self.armed_round
        if armed is not None and self.rounds.owner(armed) == self.index:
            coord = CoordinatorState.armed(self.index, instance, armed)
        else:
            coord = CoordinatorState(self.index, instance,
                                     highest_seen=armed if armed is not None else NONE)
        s = Slot(coord, LearnerState(instance), fast_round=armed if armed is not None else NONE)
        self.slots[instance] = s
        return s

    # ------------------------------------------------------------------------
    # Timers
    # ------------------------------------------------------------------------

    def _arm_timer(self, s: Slot, ctx: Context, fast: bool) -> None:
        s.generation += 1
        s.timer_armed = True
        base = self.timeouts.conflict if fast else self.timeouts.phase
        key = (TIMER_STREAM, self.index, s.coord.instance, s.attempts)
        jitter = float(uniforms(self.seed, key, 1)[0])
        delay = base * min(2 ** s.attempts, MAX_BACKOFF) * (1.0 + jitter)
        ctx.set_timer(self.address, s.coord.instance, s.generation, delay)

    def _cancel_timer(self, s: Slot) -> None:
        s.generation += 1
        s.timer_armed = False

    # ------------------------------------------------------------------------
    # Coordinator plumbing
    # ------------------------------------------------------------------------

    def _coordinate(self, s: Slot, step: Step, ctx: Context) -> None:
        before = s.coord
        s.coord = step.state
        if before.phase is Phase.PREPARING and s.coord.phase is not Phase.PREPARING:
            self._record_pick(s, ctx)
        _apply(ctx, self.address, step)
        for msg in step.messages:
            if isinstance(msg, P2a) and is_any(msg.value):
                s.fast_round = msg.round
                if s.coord.value is not None:
                    ctx.send(self.address, Propose(msg.instance, s.coord.value))
                self._arm_timer(s, ctx, fast=True)

    def _record_pick(self, s: Slot, ctx: Context) -> None:
        c = s.coord
        proposal = c.proposal
        ctx.record(self.address, tr.PICK, {
            "instance": c.instance,
            "round": c.round,
            "quorum": sorted(c.promised_by),
            "promises": [[m.sender, m.vrnd, m.vval] for m in sorted(c.promises, key=lambda m: m.sender)],
            "outcome": c.pick.kind.value,
            "k": c.pick.k,
            "o4": list(c.pick.o4),
            "proposal": None if proposal is None or is_any(proposal) else proposal,
            "any": is_any(proposal),
        })

    def _start(self, s: Slot, ctx: Context) -> None:
        r = self.rounds.next_round(self.index, max(s.coord.highest_seen, s.coord.round))
        if r is None:
            return
        s.fast_round = NONE
        self._coordinate(s, coordinator.start_round(s.coord, r, self.rounds), ctx)
        self._arm_timer(s, ctx, fast=False)

    def _recover(self, s: Slot, failed: int, reason: str, ctx: Context) -> None:
        step = coordinator.recover_conflict(s.coord, failed, self.rounds)
        new_round = step.state.round
        s.fast_round = NONE
        if new_round != s.coord.round:
            ctx.record(self.address, tr.RECOVER, {"instance": s.coord.instance, "from": failed,
                                                 "round": new_round, "reason": reason})
        self._coordinate(s, step, ctx)
        self._arm_timer(s, ctx, fast=False)

    def _decide(self, s: Slot, r: int, value: str, via: str, ctx: Context) -> None:
        if s.decided is not None:
            return
        s.decided = (r, value)
        self._cancel_timer(s)
        ctx.record(self.address, tr.DECIDE,
                   {"instance": s.coord.instance, "round": r, "value": value, "via": via})

    # ------------------------------------------------------------------------
    # Events
    # ------------------------------------------------------------------------

    def on_client(self, instance: int, value: str, ctx: Context) -> None:
        s = self.slot(instance)
        s.submitted.append(value)
        if s.decided is not None:
            return
        self._coordinate(s, coordinator.on_value(s.coord, value), ctx)
        if s.fast_round != NONE and s.fast_round >= s.coord.highest_seen:
            ctx.send(self.address, Propose(instance, value))
            if not s.timer_armed:
                self._arm_timer(s, ctx, fast=True)
        elif s.coord.phase is Phase.IDLE:
            self._start(s, ctx)

    def handle(self, msg: Message, ctx: Context) -> None:
        s = self.slot(msg.instance)
        if isinstance(msg, P1b):
            self._coordinate(s, coordinator.on_p1b(s.coord, msg, self.quorums, self.rounds), ctx)
        elif isinstance(msg, P2b):
            self._on_p2b(s, msg, ctx)
        elif isinstance(msg, Decided):
            s.coord = coordinator.note_round(s.coord, msg.round)
            self._decide(s, msg.round, msg.value, "announce", ctx)

    def _on_p2b(self, s: Slot, msg: P2b, ctx: Context) -> None:
        s.coord = coordinator.note_round(s.coord, msg.round)
        before = s.learner
        step = learner.on_p2b(before, msg, self.quorums, self.rounds)
        s.learner = step.state
        for fault in step.faults:
            ctx.record(self.address, tr.FAULT, fault.to_record())
        fresh = sorted(s.learner.decisions - before.decisions)
        if fresh:
            r, value = fresh[0]
            self._decide(s, r, value, "quorum", ctx)
            return
        if s.decided is not None:
            return
        r = msg.round
        if (self.rounds.is_fast(r) and r not in s.recovered and self.rounds.owner(r) == self.index
                and r >= s.coord.round and fast_round_stuck(s.learner, r, self.quorums)):
            s.recovered.add(r)
            self._recover(s, r, "stuck", ctx)

    def on_timer(self, instance: int, generation: int, ctx: Context) -> None:
        s = self.slot(instance)
        if generation != s.generation or s.decided is not None:
            return
        s.timer_armed = False
        ctx.record(self.address, tr.TIMER, {"instance": instance, "attempt": s.attempts})
        s.attempts += 1
        failed = max([s.coord.round, s.fast_round, *s.learner.rounds])
        self._recover(s, failed, "timeout", ctx)
