"""
Exhaustive exploration of tiny configurations.

The network is a set of sent messages: once sent, a message can be
received by any of its destinations any number of times, in any order, or
never. That covers loss, duplication and reordering without modelling them
one by one. A depth-first search walks every reachable state of the pure
core transitions and checks the safety invariants in each one. Learning is
derived from the P2b messages in the set.

At every phase-1 completion the pick is checked against what was already
chosen: a value chosen in an earlier round must come back FORCED.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from ffpaxos.checker.monitors import (
    ACCEPTOR_MONOTONICITY, AGREEMENT, O4_UNIQUENESS, PER_ROUND_AGREEMENT, SAFETY, VALIDITY,
)
from ffpaxos.core import acceptor, coordinator
from ffpaxos.core.acceptor import AcceptorState
from ffpaxos.core.coordinator import CoordinatorState, Phase
from ffpaxos.core.messages import (
    Message, P1a, P1b, P2a, P2b, Propose, is_any, payload,
)
from ffpaxos.core.pick import chosen
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import BoundExceededError
from ffpaxos.quorum import QuorumSystem
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.trace import Trace

logger = logging.getLogger(__name__)

MAX_ACCEPTORS = 3
MAX_PROPOSERS = 2
MAX_VALUES = 2
MAX_ROUNDS = 2
DEFAULT_MAX_STATES = 2_000_000
PICK_SOUNDNESS = "pick-soundness"

INSTANCE = 0
VALUE_NAMES = ("X", "Y")


@dataclass(frozen=True)
class TinyModel:
    quorums: QuorumSystem
    rounds: RoundConfig
    values: Tuple[str, ...] = VALUE_NAMES
    max_round: int = 2               # rounds 0 .. max_round - 1

    def __post_init__(self):
        for what, value, bound in (("acceptors", self.quorums.n, MAX_ACCEPTORS),
                                   ("proposers", self.rounds.proposers, MAX_PROPOSERS),
                                   ("values", len(self.values), MAX_VALUES),
                                   ("rounds", self.max_round, MAX_ROUNDS)):
            if value > bound:
                raise BoundExceededError(what, value, bound)

    def own_value(self, proposer: int) -> str:
        return self.values[proposer % len(self.values)]


# state = (acceptors, coordinators, sent messages, client proposals sent)
State = Tuple[Tuple[AcceptorState, ...], Tuple[CoordinatorState, ...],
              FrozenSet[Message], FrozenSet[str]]


@dataclass(frozen=True)
class Action:
    kind: str                        # start | propose | receive
    node: str
    message: Optional[Message] = None
    round: int = -1
    value: Optional[str] = None

    def __str__(self):
        if self.kind == "start":
            return f"{self.node} starts round {self.round}"
        if self.kind == "propose":
            return f"client proposes {self.value}"
        return f"{self.node} receives {self.message}"


@dataclass
class ExhaustiveViolation:
    invariant: str
    detail: str
    path: List[Action]
    counterexample: Trace

    def to_record(self) -> dict:
        return {"invariant": self.invariant, "detail": self.detail,
                "path": [str(a) for a in self.path]}


@dataclass
class ExhaustiveSummary:
    states: int = 0
    transitions: int = 0
    max_depth: int = 0
    truncated_depth: bool = False
    truncated_states: bool = False
    violations: List[ExhaustiveViolation] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not (self.truncated_depth or self.truncated_states)

    @property
    def partial(self) -> bool:
        return not self.complete

    @property
    def clean(self) -> bool:
        return not self.violations

    @property
    def exit_code(self) -> int:
        return 0 if self.clean else 1

    def to_record(self) -> dict:
        return {
            "states": self.states,
            "transitions": self.transitions,
            "max_depth": self.max_depth,
            "complete": self.complete,
            "violations": [v.to_record() for v in self.violations],
        }


# ============================================================================
# Transition relation
# ============================================================================

def initial_state(model: TinyModel) -> State:
    accs = tuple(AcceptorState(me=i) for i in range(model.quorums.n))
    coords = tuple(CoordinatorState(me=p, instance=INSTANCE, value=model.own_value(p))
                   for p in range(model.rounds.proposers))
    return accs, coords, frozenset(), frozenset()


def _votes(msgs: FrozenSet[Message]):
    return [(m.round, m.sender, m.value) for m in msgs if isinstance(m, P2b)]


def successors(model: TinyModel, state: State) -> Iterator[Tuple[Action, State, Optional[tuple]]]:
    """(action, next state, pick info) for every enabled action that changes the state"""
    accs, coords, msgs, proposed = state
    rc, qs = model.rounds, model.quorums

    for p, c in enumerate(coords):
        for r in range(c.round + 1, model.max_round):
            if rc.owner(r) == p:
                step = coordinator.start_round(c, r, rc)
                new_coords = coords[:p] + (step.state,) + coords[p + 1:]
                yield (Action("start", f"p{p}", round=r),
                       (accs, new_coords, msgs | set(step.messages), proposed), None)

    if any(rc.is_fast(r) for r in range(model.max_round)):
        for v in model.values:
            if v not in proposed:
                yield (Action("propose", "client", value=v),
                       (accs, coords, msgs | {Propose(INSTANCE, v)}, proposed | {v}), None)

    for m in sorted(msgs, key=repr):
        if isinstance(m, (P1a, P2a, Propose)):
            for i, st in enumerate(accs):
                if isinstance(m, P1a):
                    step = acceptor.on_p1a(st, m)
                elif isinstance(m, P2a):
                    step = acceptor.on_p2a(st, m, rc)
                else:
                    step = acceptor.on_propose(st, m)
                if step.state == st and not step.faults:
                    continue
                new_accs = accs[:i] + (step.state,) + accs[i + 1:]
                yield (Action("receive", f"a{i}", m),
                       (new_accs, coords, msgs | set(step.messages), proposed), None)
        elif isinstance(m, P1b):
            p = rc.owner(m.round)
            c = coords[p]
            step = coordinator.on_p1b(c, m, qs, rc)
            if step.state == c:
                continue
            new_coords = coords[:p] + (step.state,) + coords[p + 1:]
            pick = None
            if c.phase is Phase.PREPARING and step.state.phase is not Phase.PREPARING:
                pick = (step.state.round, step.state.pick)
            yield (Action("receive", f"p{p}", m),
                   (accs, new_coords, msgs | set(step.messages), proposed), pick)


def check_state(model: TinyModel, before: State, after: State,
                pick: Optional[tuple]) -> List[Tuple[str, str]]:
    found = []
    decided = chosen(_votes(after[2]), model.quorums, model.rounds)
    values = sorted({v for (_, v) in decided})
    if len(values) > 1:
        found.append((AGREEMENT, f"chosen {sorted(decided)}"))
    rounds: Dict[int, set] = {}
    for r, v in decided:
        rounds.setdefault(r, set()).add(v)
    for r, vs in sorted(rounds.items()):
        if len(vs) > 1:
            found.append((PER_ROUND_AGREEMENT, f"round {r} chose {sorted(vs)}"))
    proposed = set(model.values)
    for _, v in decided:
        if v not in proposed:
            found.append((VALIDITY, f"chose unproposed {v!r}"))
    for old, new in zip(before[0], after[0]):
        if new.rnd < old.rnd or new.vrnd < old.vrnd:
            found.append((ACCEPTOR_MONOTONICITY, f"a{new.me} regressed"))
    if pick is not None:
        r, outcome = pick
        if len(outcome.o4) > 1:
            found.append((O4_UNIQUENESS, f"round {r} O4 = {list(outcome.o4)}"))
        earlier = chosen(_votes(before[2]), model.quorums, model.rounds)
        for k, v in sorted(earlier):
            if k < r and not (outcome.is_forced and outcome.value == v):
                found.append((PICK_SOUNDNESS, f"{v} chosen in round {k} but round {r} picked {outcome}"))
    return found


# ============================================================================
# Search
# ============================================================================

def path_trace(model: TinyModel, path: Sequence[Action]) -> Trace:
    """Counterexample as a trace slice: one step record per action"""
    trace = Trace(0, "exhaustive")
    for v in model.values:
        trace.add(0.0, "client", tr.CLIENT, {"instance": INSTANCE, "value": v})
    for number, action in enumerate(path, start=1):
        data = {"instance": INSTANCE, "action": action.kind}
        if action.message is not None:
            data["message"] = payload(action.message)
        if action.kind == "start":
            data["round"] = action.round
        if action.value is not None:
            data["value"] = action.value
        trace.add(float(number), action.node, tr.STEP, data)
    return trace


def _decide_records(model: TinyModel, state: State, trace: Trace, at: float) -> None:
    for r, v in sorted(chosen(_votes(state[2]), model.quorums, model.rounds)):
        trace.add(at, "learner", tr.DECIDE, {"instance": INSTANCE, "round": r, "value": v})


def exhaustive_explore(model: TinyModel, depth: Optional[int] = None,
                       max_states: int = DEFAULT_MAX_STATES,
                       stop_at_first: bool = True) -> ExhaustiveSummary:
    summary = ExhaustiveSummary()
    reported: Set[str] = set()
    start = initial_state(model)
    parents: Dict[State, Optional[Tuple[State, Action]]] = {start: None}
    depths = {start: 0}
    stack = [start]
    summary.states = 1

    def path_to(state: State) -> List[Action]:
        out = []
        while parents[state] is not None:
            state, action = parents[state]
            out.append(action)
        return out[::-1]

    while stack:
        state = stack.pop()
        d = depths[state]
        if depth is not None and d >= depth:
            if any(True for _ in successors(model, state)):
                summary.truncated_depth = True
            continue
        for action, nxt, pick in successors(model, state):
            summary.transitions += 1
            problems = check_state(model, state, nxt, pick)
            if stop_at_first:
                # one counterexample per invariant is enough
                problems = [(i, text) for i, text in problems if i not in reported]
            if problems:
                path = path_to(state) + [action]
                trace = path_trace(model, path)
                _decide_records(model, nxt, trace, float(len(path)))
                for invariant, detail in problems:
                    reported.add(invariant)
                    summary.violations.append(ExhaustiveViolation(invariant, detail, path, trace))
                    logger.warning("exhaustive: %s violated after %d steps: %s",
                                   invariant, len(path), detail)
                if stop_at_first and any(i in SAFETY for i, _ in problems):
                    summary.max_depth = max(summary.max_depth, d + 1)
                    return summary
            if nxt in parents:
                continue
            if summary.states >= max_states:
                summary.truncated_states = True
                continue
            parents[nxt] = (state, action)
            depths[nxt] = d + 1
            summary.states += 1
            summary.max_depth = max(summary.max_depth, d + 1)
            stack.append(nxt)

    if summary.partial:
        logger.warning("exhaustive search stopped early after %d states (partial result)",
                       summary.states)
    else:
        logger.info("exhaustive search covered %d states, %d transitions",
                    summary.states, summary.transitions)
    return summary
