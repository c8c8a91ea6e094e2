"""
Binary wire format for protocol messages

Every simulated link encodes the envelope at send time and decodes it at
delivery, so what a node receives is exactly what the codec can carry.
Rounds are signed (NONE is -1), values are length-prefixed UTF-8.
"""

from typing import Tuple

from construct import (
    Enum, Flag, If, Int8ub, Int64sb, PaddedString, PascalString, Struct, Switch, VarInt, this,
)

from ffpaxos.core.messages import (
    ANY, P1a, P1b, P2a, P2b, Decided, Message, Propose, is_any, kind_of,
)


# ============================================================================
# Constructs
# ============================================================================

Address = Struct(
    "role" / PaddedString(1, "ascii"),
    "index" / VarInt,
)

Round = Int64sb

Text = PascalString(VarInt, "utf8")

OptionalText = Struct(
    "present" / Flag,
    "text" / If(this.present, Text),
)

MessageKind = Enum(Int8ub,
    P1a=1,
    P1b=2,
    P2a=3,
    Propose=4,
    P2b=5,
    Decided=6,
)

P1aBody = Struct(
    "round" / Round,
)

P1bBody = Struct(
    "round" / Round,
    "vrnd" / Round,
    "vval" / OptionalText,
    "sender" / VarInt,
)

P2aBody = Struct(
    "round" / Round,
    "is_any" / Flag,
    "value" / If(lambda ctx: not ctx.is_any, Text),
)

ProposeBody = Struct(
    "value" / Text,
)

P2bBody = Struct(
    "round" / Round,
    "value" / Text,
    "sender" / VarInt,
)

DecidedBody = Struct(
    "round" / Round,
    "value" / Text,
)

Frame = Struct(
    "src" / Address,
    "dst" / Address,
    "kind" / MessageKind,
    "instance" / VarInt,
    "body" / Switch(this.kind, {
        "P1a": P1aBody,
        "P1b": P1bBody,
        "P2a": P2aBody,
        "Propose": ProposeBody,
        "P2b": P2bBody,
        "Decided": DecidedBody,
    }),
)


# ============================================================================
# Encode / decode
# ============================================================================

def _address(addr: str) -> dict:
    if len(addr) < 2 or not addr[1:].isdigit():
        raise ValueError(f"malformed node address {addr!r}")
    return {"role": addr[0], "index": int(addr[1:])}


def _body(msg: Message) -> dict:
    if isinstance(msg, P1a):
        return {"round": msg.round}
    if isinstance(msg, P1b):
        return {"round": msg.round, "vrnd": msg.vrnd, "sender": msg.sender,
                "vval": {"present": msg.vval is not None, "text": msg.vval}}
    if isinstance(msg, P2a):
        anyv = is_any(msg.value)
        return {"round": msg.round, "is_any": anyv, "value": None if anyv else msg.value}
    if isinstance(msg, Propose):
        return {"value": msg.value}
    if isinstance(msg, P2b):
        return {"round": msg.round, "value": msg.value, "sender": msg.sender}
    if isinstance(msg, Decided):
        return {"round": msg.round, "value": msg.value}
    raise ValueError(f"cannot encode {msg!r}")


def encode(src: str, dst: str, msg: Message) -> bytes:
    return Frame.build({
        "src": _address(src),
        "dst": _address(dst),
        "kind": kind_of(msg),
        "instance": msg.instance,
        "body": _body(msg),
    })


def decode(data: bytes) -> Tuple[str, str, Message]:
    frame = Frame.parse(data)
    src = f"{frame.src.role}{frame.src.index}"
    dst = f"{frame.dst.role}{frame.dst.index}"
    kind = str(frame.kind)
    body = frame.body
    instance = frame.instance
    if kind == "P1a":
        msg = P1a(instance, body.round)
    elif kind == "P1b":
        vval = body.vval.text if body.vval.present else None
        msg = P1b(instance, body.round, body.vrnd, vval, body.sender)
    elif kind == "P2a":
        msg = P2a(instance, body.round, ANY if body.is_any else body.value)
    elif kind == "Propose":
        msg = Propose(instance, body.value)
    elif kind == "P2b":
        msg = P2b(instance, body.round, body.value, body.sender)
    else:
        msg = Decided(instance, body.round, body.value)
    return src, dst, msg
