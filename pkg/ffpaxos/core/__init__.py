"""
Pure protocol state machines: acceptor, coordinator, learner and the pick rule.

Every transition takes a state and a message and returns a Step holding the
new state, the messages to send and any faults observed. Nothing here does
I/O or keeps hidden state.
"""

from ffpaxos.core.acceptor import AcceptorState
from ffpaxos.core.acceptor import on_p1a as acceptor_on_p1a
from ffpaxos.core.acceptor import on_p2a as acceptor_on_p2a
from ffpaxos.core.acceptor import on_propose as acceptor_on_propose
from ffpaxos.core.coordinator import CoordinatorState, Phase
from ffpaxos.core.coordinator import on_p1b as coordinator_on_p1b
from ffpaxos.core.coordinator import on_value as coordinator_on_value
from ffpaxos.core.coordinator import recover_conflict
from ffpaxos.core.coordinator import start_round as coordinator_start_round
from ffpaxos.core.learner import LearnerState, fast_round_stuck
from ffpaxos.core.learner import on_p2b as learner_on_p2b
from ffpaxos.core.messages import (
    ANY, Decided, Dest, Fault, Message, P1a, P1b, P2a, P2b, Propose, Step, destination, is_any,
)
from ffpaxos.core.pick import PickKind, PickOutcome, chosen, o4_values, pickable_values
from ffpaxos.core.rounds import NONE, RoundConfig, RoundKind

__all__ = [
    "ANY", "NONE", "AcceptorState", "CoordinatorState", "Decided", "Dest", "Fault",
    "LearnerState", "Message", "P1a", "P1b", "P2a", "P2b", "Phase", "PickKind",
    "PickOutcome", "Propose", "RoundConfig", "RoundKind", "Step",
    "acceptor_on_p1a", "acceptor_on_p2a", "acceptor_on_propose", "chosen",
    "coordinator_on_p1b", "coordinator_on_value", "coordinator_start_round",
    "destination", "fast_round_stuck", "is_any", "learner_on_p2b", "o4_values",
    "pickable_values", "recover_conflict",
]
