"""
Open-loop client workload.

Requests arrive at a fixed rate (or as a Poisson process). With probability
conflict_fraction a request reuses its predecessor's instance and is sent
race_gap_ms after it, which is how instance races are injected.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ffpaxos.errors import ConfigError

logger = logging.getLogger(__name__)

INTERVALS = ("fixed", "poisson")

# spawn_key purpose shared with the network streams
WORKLOAD_STREAM = 7


@dataclass(frozen=True)
class Request:
    time: float          # simulated ms
    client: int
    instance: int
    value: str
    racing: bool = False


@dataclass(frozen=True)
class WorkloadSpec:
    rate: float = 100.0              # requests per simulated second
    duration: float = 0.05           # simulated seconds
    clients: int = 1
    conflict_fraction: float = 0.10
    interval: str = "fixed"
    race_gap_ms: Optional[float] = None
    drain_ms: float = 500.0

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigError(f"workload.rate must be >= 0, got {self.rate}")
        if self.duration < 0:
            raise ConfigError(f"workload.duration must be >= 0, got {self.duration}")
        if self.clients < 1:
            raise ConfigError(f"workload.clients must be >= 1, got {self.clients}")
        if not 0.0 <= self.conflict_fraction <= 1.0:
            raise ConfigError(f"workload.conflict_fraction must be in [0, 1], "
                              f"got {self.conflict_fraction}")
        if self.interval not in INTERVALS:
            raise ConfigError(f"workload.interval must be one of {INTERVALS}, got {self.interval!r}")
        if self.race_gap_ms is not None and self.race_gap_ms < 0:
            raise ConfigError(f"workload.race_gap_ms must be >= 0, got {self.race_gap_ms}")
        if self.drain_ms < 0:
            raise ConfigError(f"workload.drain_ms must be >= 0, got {self.drain_ms}")

    @property
    def count(self) -> int:
        return int(round(self.rate * self.duration))

    @property
    def spacing_ms(self) -> float:
        return 1000.0 / self.rate if self.rate > 0 else 0.0

    @property
    def gap_ms(self) -> float:
        return self.spacing_ms if self.race_gap_ms is None else self.race_gap_ms

    @property
    def horizon_ms(self) -> float:
        return self.duration * 1000.0 + self.drain_ms

    def requests(self, seed: int) -> List[Request]:
        count = self.count
        if count == 0:
            return []
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(WORKLOAD_STREAM,)))
        if self.interval == "poisson":
            starts = np.cumsum(rng.exponential(self.spacing_ms, size=count))
        else:
            starts = np.arange(count) * self.spacing_ms
        races = rng.random(size=count) < self.conflict_fraction

        out: List[Request] = []
        instance = -1
        for i in range(count):
            client = i % self.clients
            value = f"c{client}-{i}"
            prev = out[-1] if out else None
            if prev is not None and races[i] and not prev.racing:
                out[-1] = Request(prev.time, prev.client, prev.instance, prev.value, True)
                out.append(Request(prev.time + self.gap_ms, client, prev.instance, value, True))
                continue
            instance += 1
            out.append(Request(float(starts[i]), client, instance, value))
        logger.debug("workload: %d requests over %d instances", len(out), instance + 1)
        return out

    def to_dict(self) -> dict:
        return {
            "rate": self.rate, "duration": self.duration, "clients": self.clients,
            "conflict_fraction": self.conflict_fraction, "interval": self.interval,
            "race_gap_ms": self.race_gap_ms, "drain_ms": self.drain_ms,
        }
