"""
Protocol messages, faults and the Step result of every transition.

Every message carries the consensus instance it belongs to so that one
cluster can run many independent single-decree instances.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

from ffpaxos.core.rounds import NONE


class _AnyValue:
    """Marker a fast-round coordinator sends instead of a value"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY"

    def __reduce__(self):
        return "ANY"


ANY = _AnyValue()

Value = str
Proposal = Union[Value, _AnyValue]


def is_any(value) -> bool:
    return value is ANY


# ============================================================================
# Messages
# ============================================================================

@dataclass(frozen=True)
class P1a:
    instance: int
    round: int


@dataclass(frozen=True)
class P1b:
    instance: int
    round: int
    vrnd: int
    vval: Optional[Value]
    sender: int


@dataclass(frozen=True)
class P2a:
    instance: int
    round: int
    value: Proposal


@dataclass(frozen=True)
class Propose:
    instance: int
    value: Value


@dataclass(frozen=True)
class P2b:
    instance: int
    round: int
    value: Value
    sender: int


@dataclass(frozen=True)
class Decided:
    instance: int
    round: int
    value: Value


Message = Union[P1a, P1b, P2a, Propose, P2b, Decided]
MESSAGE_TYPES = (P1a, P1b, P2a, Propose, P2b, Decided)


class Dest(Enum):
    ACCEPTORS = "acceptors"
    OWNER = "owner"             # coordinator owning the message's round
    LEARNERS = "learners"       # learners and proposers
    PROPOSERS = "proposers"


_ROUTES = {
    P1a: Dest.ACCEPTORS,
    P2a: Dest.ACCEPTORS,
    Propose: Dest.ACCEPTORS,
    P1b: Dest.OWNER,
    P2b: Dest.LEARNERS,
    Decided: Dest.PROPOSERS,
}


def destination(msg: Message) -> Dest:
    return _ROUTES[type(msg)]


def kind_of(msg: Message) -> str:
    return type(msg).__name__


def payload(msg: Message) -> Dict[str, Any]:
    """JSON-friendly view of a message, as written to traces"""
    out: Dict[str, Any] = {"type": kind_of(msg), "instance": msg.instance}
    if isinstance(msg, P1a):
        out["round"] = msg.round
    elif isinstance(msg, P1b):
        out.update(round=msg.round, vrnd=msg.vrnd, vval=msg.vval, sender=msg.sender)
    elif isinstance(msg, P2a):
        if is_any(msg.value):
            out.update(round=msg.round, value=None, any=True)
        else:
            out.update(round=msg.round, value=msg.value, any=False)
    elif isinstance(msg, Propose):
        out["value"] = msg.value
    elif isinstance(msg, P2b):
        out.update(round=msg.round, value=msg.value, sender=msg.sender)
    elif isinstance(msg, Decided):
        out.update(round=msg.round, value=msg.value)
    return out


def from_payload(data: Dict[str, Any]) -> Message:
    kind = data["type"]
    instance = data["instance"]
    if kind == "P1a":
        return P1a(instance, data["round"])
    if kind == "P1b":
        return P1b(instance, data["round"], data["vrnd"], data["vval"], data["sender"])
    if kind == "P2a":
        return P2a(instance, data["round"], ANY if data.get("any") else data["value"])
    if kind == "Propose":
        return Propose(instance, data["value"])
    if kind == "P2b":
        return P2b(instance, data["round"], data["value"], data["sender"])
    if kind == "Decided":
        return Decided(instance, data["round"], data["value"])
    raise ValueError(f"unknown message type {kind!r}")


# ============================================================================
# Transition results
# ============================================================================

# Fault kinds
ANY_ON_CLASSIC = "any-on-classic"
AGREEMENT_VIOLATION = "agreement-violation"
DOUBLE_VOTE = "double-vote"
NO_RECOVERY_ROUND = "no-recovery-round"


@dataclass(frozen=True)
class Fault:
    kind: str
    instance: int = 0
    round: int = NONE
    detail: str = ""

    def to_record(self) -> Dict[str, Any]:
        return {"fault": self.kind, "instance": self.instance,
                "round": self.round, "detail": self.detail}


@dataclass(frozen=True)
class Step:
    """New state, messages to send and faults observed by one transition"""
    state: Any
    messages: Tuple[Message, ...] = ()
    faults: Tuple[Fault, ...] = ()
