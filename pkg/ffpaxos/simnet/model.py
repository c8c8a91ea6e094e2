"""Simulation configuration: delay models, links, partitions, timeouts."""

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple

from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import ConfigError
from ffpaxos.quorum import QuorumSystem

DELAY_MODELS = ("constant", "uniform", "exponential")
DEFAULT_MAX_EVENTS = 2_000_000


@dataclass(frozen=True)
class DelayModel:
    """base + jitter, in simulated ms"""
    model: str = "constant"
    base: float = 1.0
    lo: float = 0.0
    hi: float = 0.0
    mean: float = 0.0

    def __post_init__(self):
        if self.model not in DELAY_MODELS:
            raise ConfigError(f"delay model must be one of {DELAY_MODELS}, got {self.model!r}")
        for name in ("base", "lo", "hi", "mean"):
            if getattr(self, name) < 0:
                raise ConfigError(f"delay {name} must be >= 0, got {getattr(self, name)}")
        if self.lo > self.hi:
            raise ConfigError(f"delay lo={self.lo} exceeds hi={self.hi}")

    def quantile(self, u: float) -> float:
        """Delay at uniform draw u in [0, 1)"""
        if self.model == "uniform":
            return self.base + self.lo + (self.hi - self.lo) * u
        if self.model == "exponential" and self.mean > 0:
            return self.base - self.mean * math.log1p(-u)
        return self.base

    def to_dict(self) -> dict:
        return {"model": self.model, "base": self.base, "lo": self.lo,
                "hi": self.hi, "mean": self.mean}


@dataclass(frozen=True)
class LinkModel:
    delay: DelayModel = field(default_factory=DelayModel)
    drop: float = 0.0
    dup: float = 0.0

    def __post_init__(self):
        for name in ("drop", "dup"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} probability must be in [0, 1], got {p}")

    def to_dict(self) -> dict:
        return {"delay": self.delay.to_dict(), "drop": self.drop, "dup": self.dup}


@dataclass(frozen=True)
class Partition:
    """Between start and end no message crosses between side and the rest"""
    start: float
    end: float
    side: FrozenSet[str]

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ConfigError(f"partition interval [{self.start}, {self.end}) is not well-ordered")

    def active(self, t: float) -> bool:
        return self.start <= t < self.end

    def separates(self, a: str, b: str, t: float) -> bool:
        return self.active(t) and ((a in self.side) != (b in self.side))

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "side": sorted(self.side)}


@dataclass(frozen=True)
class Timeouts:
    phase: float = 50.0
    conflict: float = 20.0

    def __post_init__(self):
        if self.phase <= 0 or self.conflict <= 0:
            raise ConfigError("timeouts must be positive")


@dataclass(frozen=True)
class SimConfig:
    quorums: QuorumSystem
    rounds: RoundConfig = field(default_factory=RoundConfig)
    seed: int = 0
    learners: int = 1
    link: LinkModel = field(default_factory=LinkModel)
    links: Tuple[Tuple[Tuple[str, str], LinkModel], ...] = ()
    partitions: Tuple[Partition, ...] = ()
    timeouts: Timeouts = field(default_factory=Timeouts)
    prearm: bool = True
    allow_invalid: bool = False
    max_events: int = DEFAULT_MAX_EVENTS
    name: str = ""

    def __post_init__(self):
        if self.learners < 0:
            raise ConfigError(f"learners must be >= 0, got {self.learners}")
        known = set(self.addresses())
        for (src, dst), _ in self.links:
            for addr in (src, dst):
                if addr not in known:
                    raise ConfigError(f"link override names unknown node {addr!r}")
        for part in self.partitions:
            unknown = sorted(part.side - known)
            if unknown:
                raise ConfigError(f"partition names unknown nodes {unknown}")
        ordered = sorted(self.partitions, key=lambda p: p.start)
        for a, b in zip(ordered, ordered[1:]):
            if b.start < a.end:
                raise ConfigError(f"partitions [{a.start}, {a.end}) and [{b.start}, {b.end}) overlap")

    @property
    def n(self) -> int:
        return self.quorums.n

    @property
    def proposers(self) -> int:
        return self.rounds.proposers

    def acceptor_addresses(self):
        return [f"a{i}" for i in range(self.n)]

    def proposer_addresses(self):
        return [f"p{i}" for i in range(self.proposers)]

    def learner_addresses(self):
        return [f"l{i}" for i in range(self.learners)]

    def addresses(self):
        return self.acceptor_addresses() + self.proposer_addresses() + self.learner_addresses()

    def link_for(self, src: str, dst: str) -> LinkModel:
        for key, model in self.links:
            if key == (src, dst):
                return model
        return self.link

    def separated(self, a: str, b: str, t: float) -> bool:
        return any(p.separates(a, b, t) for p in self.partitions)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "quorums": self.quorums.to_dict(),
            "rounds": self.rounds.to_dict(),
            "proposers": self.proposers,
            "learners": self.learners,
            "link": self.link.to_dict(),
            "links": [[list(key), model.to_dict()] for key, model in self.links],
            "partitions": [p.to_dict() for p in self.partitions],
            "timeouts": {"phase": self.timeouts.phase, "conflict": self.timeouts.conflict},
            "prearm": self.prearm,
            "allow_invalid": self.allow_invalid,
            "max_events": self.max_events,
        }

    def fingerprint(self, extra: Optional[Dict] = None) -> str:
        """sha256 of the canonical JSON form (seed excluded)"""
        data = self.to_dict()
        data.pop("seed")
        if extra:
            data["extra"] = extra
        text = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
