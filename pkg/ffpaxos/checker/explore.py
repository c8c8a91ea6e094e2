"""
Many-seed randomized exploration.

Each seed is one independent simulation under adversarial link settings;
every trace goes through the monitors. Seeds fan out over a process pool
when jobs > 1 and results are merged back in seed order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from ffpaxos.checker.monitors import INVARIANTS, failures, monitor
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.engine import check_system, run
from ffpaxos.simnet.model import DelayModel, LinkModel, Partition, SimConfig
from ffpaxos.simnet.network import PARTITION_STREAM, uniforms
from ffpaxos.workload import WorkloadSpec

logger = logging.getLogger(__name__)

ADVERSARIAL_DROP = 0.10
ADVERSARIAL_DUP = 0.05
JITTER_FACTOR = 2.0


def adversarial(link: LinkModel) -> LinkModel:
    """Fill in loss, duplication and jitter the link leaves unset"""
    delay = link.delay
    if delay.model == "constant":
        delay = DelayModel("exponential", base=delay.base, mean=JITTER_FACTOR * delay.base)
    return LinkModel(delay=delay,
                     drop=link.drop or ADVERSARIAL_DROP,
                     dup=link.dup or ADVERSARIAL_DUP)


def adversarial_config(config: SimConfig) -> SimConfig:
    """adversarial() on the default link and on every per-link override"""
    return replace(config, link=adversarial(config.link),
                   links=tuple((key, adversarial(model)) for key, model in config.links))


def random_partition(config: SimConfig, horizon: float) -> Partition:
    """One partition per seed: a random side, somewhere in the first half of the run"""
    addresses = config.addresses()
    u = uniforms(config.seed, (PARTITION_STREAM,), len(addresses) + 2)
    side = frozenset(a for a, x in zip(addresses, u[2:]) if x < 0.5)
    if not side or len(side) == len(addresses):
        side = frozenset(addresses[:1])
    start = float(u[0]) * horizon / 2
    length = 5.0 + float(u[1]) * 45.0
    return Partition(start, start + length, side)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    failed: Tuple[str, ...] = ()
    details: Tuple[str, ...] = ()
    instances: int = 0
    decided: int = 0
    events: int = 0


@dataclass
class Violation:
    seed: int
    invariant: str
    detail: str

    def to_record(self) -> dict:
        return {"seed": self.seed, "invariant": self.invariant, "detail": self.detail}


@dataclass
class ExploreSummary:
    seeds_run: int = 0
    violations: List[Violation] = field(default_factory=list)
    instances: int = 0
    decided: int = 0
    events: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations

    @property
    def first_failing_seed(self) -> Optional[int]:
        return min((v.seed for v in self.violations), default=None)

    @property
    def exit_code(self) -> int:
        return 0 if self.clean else 1

    def add(self, result: SeedResult) -> None:
        self.seeds_run += 1
        self.instances += result.instances
        self.decided += result.decided
        self.events += result.events
        for invariant, detail in zip(result.failed, result.details):
            self.violations.append(Violation(result.seed, invariant, detail))

    def to_record(self) -> dict:
        return {
            "seeds_run": self.seeds_run,
            "violations": [v.to_record() for v in self.violations],
            "first_failing_seed": self.first_failing_seed,
            "instances": self.instances,
            "decided": self.decided,
            "events": self.events,
        }


def run_seed(config: SimConfig, workload: WorkloadSpec, seed: int,
             partitions: bool = False, invariants=INVARIANTS) -> SeedResult:
    config = replace(config, seed=seed)
    if partitions and not config.partitions:
        config = replace(config, partitions=(random_partition(config, workload.horizon_ms),))
    trace = run(config, workload)
    bad = [v for v in failures(monitor(trace)) if v.invariant in invariants]
    decided = {r["instance"] for r in trace.decisions()}
    instances = {r["instance"] for r in trace.of_kind(tr.CLIENT)}
    return SeedResult(
        seed=seed,
        failed=tuple(v.invariant for v in bad),
        details=tuple(v.detail for v in bad),
        instances=len(instances),
        decided=len(decided & instances),
        events=trace.stats().get("events", 0),
    )


def _run_chunk(args) -> List[SeedResult]:
    config, workload, seeds, partitions = args
    return [run_seed(config, workload, s, partitions) for s in seeds]


def explore(config: SimConfig, workload: WorkloadSpec, seeds: int, jobs: int = 1,
            first_seed: Optional[int] = None, random_partitions: bool = False,
            faults: bool = True) -> ExploreSummary:
    check_system(config)
    if faults:
        config = adversarial_config(config)
    start = config.seed if first_seed is None else first_seed
    seed_list = list(range(start, start + max(seeds, 0)))
    summary = ExploreSummary()
    if not seed_list:
        return summary

    logger.info("exploring %d seeds from %d with %d job(s)", len(seed_list), start, jobs)
    if jobs > 1:
        size = max(1, len(seed_list) // (jobs * 8))
        chunks = [seed_list[i:i + size] for i in range(0, len(seed_list), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for chunk in pool.map(
                _run_chunk, [(config, workload, c, random_partitions) for c in chunks]) for r in chunk]
    else:
        results = _run_chunk((config, workload, seed_list, random_partitions))

    for result in sorted(results, key=lambda r: r.seed):
        summary.add(result)
        for invariant, detail in zip(result.failed, result.details):
            logger.warning("seed %d violates %s: %s", result.seed, invariant, detail)
    logger.info("explored %d seeds, %d violation(s)", summary.seeds_run, len(summary.violations))
    return summary
