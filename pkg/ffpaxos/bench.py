"""
Latency and conflict benchmarks.

Runs the simulator under an open-loop workload, turns the trace into one
record per instance and aggregates latency percentiles, recovery counts
and traffic. Fast Paxos systems run on the same engine through their
Fast Flexible reading (phase-1 quorums = classic quorums).
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import InvalidSystemError
from ffpaxos.quorum import (
    Family, LegacyQuorumSystem, QuorumSystem, validate_fast_flexible, validate_fast_paxos,
)
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.engine import run
from ffpaxos.simnet.model import SimConfig
from ffpaxos.simnet.trace import Trace
from ffpaxos.workload import WorkloadSpec

logger = logging.getLogger(__name__)

System = Union[QuorumSystem, LegacyQuorumSystem]

# decision paths
FAST = "fast"
CLASSIC = "classic"
RECOVERY = "recovery"
UNDECIDED = "undecided"

# race outcomes
FAST_WIN = "fast-win"
NO_RACE = "none"

INSTANCE_HEADER = ["config", "seed", "instance", "submit_ms", "decide_ms", "path", "rounds"]
AGGREGATE_HEADER = ["config", "metric", "value"]
SWEEP_HEADER = ["config", "interval_ms", "races", "recoveries", "fast_wins", "probability"]


@dataclass(frozen=True)
class InstanceRecord:
    config: str
    seed: int
    instance: int
    submit_ms: float
    decide_ms: Optional[float]
    path: str
    rounds: int
    racing: bool = False
    outcome: str = NO_RACE
    decided_value: Optional[str] = None
    aborted: Tuple[str, ...] = ()

    @property
    def latency_ms(self) -> Optional[float]:
        if self.decide_ms is None:
            return None
        return self.decide_ms - self.submit_ms

    def row(self) -> list:
        return [self.config, self.seed, self.instance, f"{self.submit_ms:.6f}",
                "" if self.decide_ms is None else f"{self.decide_ms:.6f}", self.path, self.rounds]


@dataclass
class BenchResult:
    name: str
    records: List[InstanceRecord] = field(default_factory=list)
    aggregates: Dict[str, Optional[float]] = field(default_factory=dict)

    def __getitem__(self, metric: str):
        return self.aggregates[metric]


# ============================================================================
# Classification
# ============================================================================

def race_outcome_classifier(votes: Mapping[int, str], quorums: QuorumSystem,
                            decided: bool = True) -> str:
    """fast-win if one value holds a fast quorum of the original fast round's votes"""
    for value in set(votes.values()):
        voters = [a for a, v in votes.items() if v == value]
        if quorums.is_quorum(Family.P2F, voters):
            return FAST_WIN
    return RECOVERY if decided else UNDECIDED


def _first_fast_votes(records, rounds: RoundConfig) -> Dict[int, str]:
    """Votes of the earliest fast round anyone voted in, by acceptor index"""
    voted = [(r["vrnd"], int(r.node[1:]), r["vval"]) for r in records
             if r["vrnd"] >= 0 and rounds.is_fast(r["vrnd"])]
    if not voted:
        return {}
    first = min(v[0] for v in voted)
    return {a: v for (rnd, a, v) in voted if rnd == first}


def instance_records(trace: Trace, quorums: QuorumSystem, rounds: RoundConfig,
                     name: str) -> List[InstanceRecord]:
    submits: Dict[int, List] = {}
    for r in trace.of_kind(tr.CLIENT):
        submits.setdefault(r["instance"], []).append(r)
    decides: Dict[int, tr.Record] = {}
    for r in trace.decisions():
        decides.setdefault(r["instance"], r)
    recovers: Dict[int, int] = {}
    for r in trace.of_kind(tr.RECOVER):
        recovers[r["instance"]] = recovers.get(r["instance"], 0) + 1
    states: Dict[int, List] = {}
    for r in trace.of_kind(tr.STATE):
        states.setdefault(r["instance"], []).append(r)

    out = []
    for instance in sorted(submits):
        subs = submits[instance]
        decision = decides.get(instance)
        recoveries = recovers.get(instance, 0)
        racing = len(subs) > 1
        if decision is None:
            path = UNDECIDED
        elif recoveries:
            path = RECOVERY
        elif rounds.is_fast(decision["round"]):
            path = FAST
        else:
            path = CLASSIC
        outcome = NO_RACE
        if racing:
            votes = _first_fast_votes(states.get(instance, []), rounds)
            outcome = race_outcome_classifier(votes, quorums, decision is not None)
        value = None if decision is None else decision["value"]
        out.append(InstanceRecord(
            config=name,
            seed=trace.seed,
            instance=instance,
            submit_ms=min(r.time for r in subs),
            decide_ms=None if decision is None else decision.time,
            path=path,
            rounds=1 + recoveries,
            racing=racing,
            outcome=outcome,
            decided_value=value,
            aborted=tuple(sorted({r["value"] for r in subs} - {value})),
        ))
    return out


# ============================================================================
# Aggregates
# ============================================================================

def _stat(values: Sequence[float], fn) -> Optional[float]:
    if len(values) == 0:
        return None
    return float(fn(np.asarray(values, dtype=np.float64)))


def aggregate(records: Sequence[InstanceRecord], duration_s: float, runs: int = 1,
              messages: int = 0, nbytes: int = 0) -> Dict[str, Optional[float]]:
    latencies = [r.latency_ms for r in records if r.latency_ms is not None]
    fast = [r.latency_ms for r in records if r.path == FAST and r.latency_ms is not None]
    races = [r for r in records if r.racing]
    recoveries = sum(1 for r in records if r.path == RECOVERY)
    race_recoveries = sum(1 for r in races if r.outcome == RECOVERY)
    instances = len(records)
    span = duration_s * max(runs, 1)
    return {
        "instances": instances,
        "decided": len(latencies),
        "undecided": instances - len(latencies),
        "mean_ms": _stat(latencies, np.mean),
        "median_ms": _stat(latencies, np.median),
        "p99_ms": _stat(latencies, lambda a: np.percentile(a, 99)),
        "fast_median_ms": _stat(fast, np.median),
        "throughput": len(latencies) / span if span > 0 else None,
        "recoveries": recoveries,
        "races": len(races),
        "fast_wins": sum(1 for r in races if r.outcome == FAST_WIN),
        "conflict_probability": race_recoveries / len(races) if races else None,
        "realized_conflict_rate": len(races) / instances if instances else None,
        "messages": messages,
        "bytes": nbytes,
        "bytes_per_instance": nbytes / instances if instances else None,
    }


# ============================================================================
# Runs
# ============================================================================

def resolve_system(system: System) -> QuorumSystem:
    """Validate for the system's own scheme and return the engine's view of it"""
    if isinstance(system, LegacyQuorumSystem):
        report = validate_fast_paxos(system)
        if not report.valid:
            raise InvalidSystemError(report)
        return system.as_fast_flexible()
    report = validate_fast_flexible(system)
    if not report.valid:
        raise InvalidSystemError(report)
    return system


def _bench_seed(args) -> Tuple[List[InstanceRecord], int, int]:
    sim, workload, seed, name = args
    config = replace(sim, seed=seed)
    trace = run(config, workload)
    stats = trace.stats()
    records = instance_records(trace, config.quorums, config.rounds, name)
    return records, stats.get("sent", 0), stats.get("bytes", 0)


def _map(fn, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def run_bench(system: System, workload: WorkloadSpec, sim: SimConfig,
              seeds: Optional[Sequence[int]] = None, jobs: int = 1,
              name: Optional[str] = None) -> BenchResult:
    quorums = resolve_system(system)
    sim = replace(sim, quorums=quorums)
    name = name or sim.name or quorums.describe()
    seeds = [sim.seed] if seeds is None else list(seeds)
    logger.info("bench %s: %d seed(s), %d requests each", name, len(seeds), workload.count)

    records: List[InstanceRecord] = []
    messages = nbytes = 0
    for recs, sent, size in _map(_bench_seed, [(sim, workload, s, name) for s in seeds], jobs):
        records.extend(recs)
        messages += sent
        nbytes += size
    return BenchResult(name, records, aggregate(records, workload.duration, len(seeds), messages, nbytes))


@dataclass
class Comparison:
    primary: BenchResult
    baseline: BenchResult

    def ratio(self, metric: str) -> Optional[float]:
        a, b = self.primary.aggregates.get(metric), self.baseline.aggregates.get(metric)
        if a is None or not b:
            return None
        return a / b

    @property
    def ratios(self) -> Dict[str, Optional[float]]:
        return {m: self.ratio(m) for m in ("median_ms", "fast_median_ms", "recoveries")}


def compare(primary: System, baseline: System, workload: WorkloadSpec, sim: SimConfig,
            seeds: Optional[Sequence[int]] = None, jobs: int = 1,
            names: Tuple[Optional[str], Optional[str]] = (None, None)) -> Comparison:
    return Comparison(run_bench(primary, workload, sim, seeds, jobs, names[0]),
                      run_bench(baseline, workload, sim, seeds, jobs, names[1]))


@dataclass(frozen=True)
class SweepRow:
    config: str
    interval_ms: float
    races: int
    recoveries: int
    fast_wins: int

    @property
    def probability(self) -> Optional[float]:
        return self.recoveries / self.races if self.races else None

    def row(self) -> list:
        p = self.probability
        return [self.config, f"{self.interval_ms:g}", self.races, self.recoveries,
                self.fast_wins, "" if p is None else f"{p:.6f}"]


def _sweep_cell(args) -> SweepRow:
    name, system, workload, sim, seeds = args
    result = run_bench(system, workload, sim, seeds, 1, name)
    races = [r for r in result.records if r.racing]
    return SweepRow(name, workload.gap_ms, len(races),
                    sum(1 for r in races if r.outcome == RECOVERY),
                    sum(1 for r in races if r.outcome == FAST_WIN))


def conflict_sweep(systems: Mapping[str, System], intervals: Sequence[float],
                   workload: WorkloadSpec, sim: SimConfig,
                   seeds: Optional[Sequence[int]] = None, jobs: int = 1) -> List[SweepRow]:
    """Fraction of injected races that need recovery, per system and race gap"""
    cells = [(name, system, replace(workload, race_gap_ms=float(gap)), sim, seeds)
             for name, system in systems.items() for gap in intervals]
    return _map(_sweep_cell, cells, jobs)


# ============================================================================
# CSV output
# ============================================================================

def write_instances(path: Union[str, Path], results: Sequence[BenchResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(INSTANCE_HEADER)
        for result in results:
            for record in result.records:
                writer.writerow(record.row())


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_aggregates(path: Union[str, Path], results: Sequence[BenchResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(AGGREGATE_HEADER)
        for result in results:
            for metric, value in result.aggregates.items():
                writer.writerow([result.name, metric, _fmt(value)])


def write_sweep(path: Union[str, Path], rows: Sequence[SweepRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow(row.row())
