"""
YAML configuration shared by every command.

    name, seed, allow_invalid
    cluster:  n, proposers, learners
    quorums:  scheme + sizes or explicit node-set families
    rounds:   classify, owner, prearm
    network:  delay, drop, dup, partitions, links, timeouts
    workload: rate, duration, clients, conflict_fraction, interval, race_gap_ms, drain_ms
    checker:  seeds, depth, max_states, random_partitions, values, rounds

Unknown keys are rejected at every level.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from ffpaxos.checker.exhaustive import DEFAULT_MAX_STATES, VALUE_NAMES, TinyModel
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import ConfigError, FFPaxosError
from ffpaxos.quorum import (
    LegacyQuorumSystem, QuorumSystem, ValidationReport, validate_fast_flexible,
    validate_fast_paxos, validate_flexible, validate_paxos,
)
from ffpaxos.simnet.model import (
    DEFAULT_MAX_EVENTS, DelayModel, LinkModel, Partition, SimConfig, Timeouts,
)
from ffpaxos.workload import WorkloadSpec

logger = logging.getLogger(__name__)

SCHEMES = ("fast-flexible", "fast-paxos", "flexible", "paxos")
FAST_SCHEMES = ("fast-flexible", "fast-paxos")

_TOP = {"name", "seed", "allow_invalid", "cluster", "quorums", "rounds", "network",
        "workload", "checker"}
_CLUSTER = {"n", "proposers", "learners"}
_QUORUM_KEYS = {
    "fast-flexible": ({"q1", "q2c", "q2f"}, {"Q1", "Q2c", "Q2f"}),
    "fast-paxos": ({"qc", "qf"}, {"Qc", "Qf"}),
    "flexible": ({"q1", "q2"}, {"Q1", "Q2"}),
    "paxos": ({"q"}, {"Q"}),
}
_ROUNDS = {"classify", "owner", "prearm"}
_NETWORK = {"delay", "drop", "dup", "partitions", "links", "timeouts"}
_DELAY = {"model", "base", "lo", "hi", "mean"}
_PARTITION = {"start", "end", "side"}
_LINK = {"src", "dst", "delay", "drop", "dup"}
_TIMEOUTS = {"phase", "conflict"}
_WORKLOAD = {"rate", "duration", "clients", "conflict_fraction", "interval",
             "race_gap_ms", "drain_ms"}
_CHECKER = {"seeds", "depth", "max_states", "random_partitions", "values", "rounds"}

System = Union[QuorumSystem, LegacyQuorumSystem]


@dataclass(frozen=True)
class CheckerSettings:
    seeds: int = 100
    depth: Optional[int] = None
    max_states: int = DEFAULT_MAX_STATES
    random_partitions: bool = False
    values: int = 2
    rounds: int = 2


@dataclass(frozen=True)
class Config:
    n: int
    scheme: str
    system: System
    engine_system: QuorumSystem
    name: str = ""
    seed: int = 0
    allow_invalid: bool = False
    proposers: int = 1
    learners: int = 1
    rounds: RoundConfig = field(default_factory=RoundConfig)
    prearm: bool = True
    link: LinkModel = field(default_factory=LinkModel)
    links: Tuple = ()
    partitions: Tuple[Partition, ...] = ()
    timeouts: Timeouts = field(default_factory=Timeouts)
    workload: WorkloadSpec = field(default_factory=WorkloadSpec)
    checker: CheckerSettings = field(default_factory=CheckerSettings)
    raw_quorums: Dict[str, Any] = field(default_factory=dict, compare=False)

    def report(self) -> ValidationReport:
        """Verdict under the config's own scheme"""
        q = self.raw_quorums
        if self.scheme == "fast-flexible":
            return validate_fast_flexible(self.system)
        if self.scheme == "fast-paxos":
            return validate_fast_paxos(self.system)
        if self.scheme == "flexible":
            return validate_flexible(self.n, q.get("q1", q.get("Q1")), q.get("q2", q.get("Q2")))
        return validate_paxos(self.n, q.get("q", q.get("Q")))

    def compare_reports(self) -> List[ValidationReport]:
        """Fast Paxos and Fast Flexible verdicts for the same cluster"""
        if isinstance(self.system, LegacyQuorumSystem):
            return [validate_fast_paxos(self.system),
                    validate_fast_flexible(self.system.as_fast_flexible())]
        return [validate_fast_paxos(self.engine_system.as_legacy()),
                validate_fast_flexible(self.engine_system)]

    def sim_config(self, seed: Optional[int] = None) -> SimConfig:
        return SimConfig(
            quorums=self.engine_system,
            rounds=self.rounds,
            seed=self.seed if seed is None else seed,
            learners=self.learners,
            link=self.link,
            links=self.links,
            partitions=self.partitions,
            timeouts=self.timeouts,
            prearm=self.prearm,
            allow_invalid=self.allow_invalid,
            max_events=DEFAULT_MAX_EVENTS,
            name=self.name,
        )

    def tiny_model(self) -> TinyModel:
        values = self.checker.values
        names = VALUE_NAMES[:values] if values <= len(VALUE_NAMES) else tuple(
            f"v{i}" for i in range(values))
        return TinyModel(self.engine_system, self.rounds, names, self.checker.rounds)


# ============================================================================
# Parsing helpers
# ============================================================================

def _mapping(value, where: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping, got {type(value).__name__}")
    return value


def _section(data: dict, name: str, allowed: set, where: str = "") -> dict:
    path = f"{where}.{name}" if where else name
    section = _mapping(data.get(name), path)
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {path}: {', '.join(map(str, unknown))}")
    return section


def _number(section: dict, key: str, default, where: str, kind=float, minimum=None):
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}.{key} must be >= {minimum}, got {value}")
    return value


def _flag(section: dict, key: str, default: bool, where: str) -> bool:
    value = section.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be true or false, got {value!r}")
    return value


def _family(value, key: str, n: int):
    if not isinstance(value, list) or not all(isinstance(q, list) for q in value):
        raise ConfigError(f"quorums.{key} must be a list of node-id lists")
    for q in value:
        bad = [x for x in q if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n]
        if bad:
            raise ConfigError(f"quorums.{key} names nodes {bad} outside [0, {n})")
    return value


# ============================================================================
# Sections
# ============================================================================

def _quorums(data: dict, n: int) -> Tuple[str, System, QuorumSystem, dict]:
    if "quorums" not in data:
        raise ConfigError("missing quorums section")
    section = _mapping(data["quorums"], "quorums")
    scheme = section.get("scheme", "fast-flexible")
    if scheme not in SCHEMES:
        raise ConfigError(f"quorums.scheme must be one of {', '.join(SCHEMES)}, got {scheme!r}")
    sizes, sets = _QUORUM_KEYS[scheme]
    unknown = sorted(set(section) - sizes - sets - {"scheme"})
    if unknown:
        raise ConfigError(f"unknown key(s) in quorums for scheme {scheme}: {', '.join(unknown)}")
    given_sizes = set(section) & sizes
    given_sets = set(section) & sets
    if given_sizes and given_sets:
        raise ConfigError("quorums: give either sizes or explicit families, not both")
    explicit = bool(given_sets)
    needed = sets if explicit else sizes
    missing = sorted(needed - set(section))
    if missing:
        raise ConfigError(f"quorums ({scheme}) is missing {', '.join(missing)}")

    raw = {}
    for key in needed:
        if explicit:
            raw[key] = _family(section[key], key, n)
        else:
            raw[key] = _number(section, key, None, "quorums", kind=int)

    try:
        if scheme == "fast-flexible":
            if explicit:
                system = QuorumSystem.explicit(n, raw["Q1"], raw["Q2c"], raw["Q2f"])
            else:
                system = QuorumSystem.cardinality(n, raw["q1"], raw["q2c"], raw["q2f"])
            engine = system
        elif scheme == "fast-paxos":
            if explicit:
                system = LegacyQuorumSystem.explicit(n, raw["Qc"], raw["Qf"])
            else:
                system = LegacyQuorumSystem.cardinality(n, raw["qc"], raw["qf"])
            engine = system.as_fast_flexible()
        elif scheme == "flexible":
            everyone = [list(range(n))]
            if explicit:
                system = engine = QuorumSystem.explicit(n, raw["Q1"], raw["Q2"], everyone)
            else:
                system = engine = QuorumSystem.cardinality(n, raw["q1"], raw["q2"], n)
        else:
            if explicit:
                system = engine = QuorumSystem.explicit(n, raw["Q"], raw["Q"], [list(range(n))])
            else:
                system = engine = QuorumSystem.cardinality(n, raw["q"], raw["q"], n)
    except FFPaxosError as exc:
        raise ConfigError(f"quorums: {exc}") from exc
    return scheme, system, engine, raw


def _delay(section: dict, where: str, default: Optional[DelayModel] = None) -> DelayModel:
    base = default or DelayModel()
    model = section.get("model", base.model)
    return DelayModel(
        model=model,
        base=_number(section, "base", base.base, where, minimum=0),
        lo=_number(section, "lo", base.lo, where, minimum=0),
        hi=_number(section, "hi", base.hi, where, minimum=0),
        mean=_number(section, "mean", base.mean, where, minimum=0),
    )


def _network(data: dict, n_nodes: List[str]):
    net = _section(data, "network", _NETWORK)
    delay = _delay(_section(net, "delay", _DELAY, "network"), "network.delay")
    link = LinkModel(delay,
                     drop=_number(net, "drop", 0.0, "network"),
                     dup=_number(net, "dup", 0.0, "network"))

    links = []
    for i, entry in enumerate(net.get("links") or []):
        where = f"network.links[{i}]"
        entry = _mapping(entry, where)
        unknown = sorted(set(entry) - _LINK)
        if unknown:
            raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
        for key in ("src", "dst"):
            if entry.get(key) not in n_nodes:
                raise ConfigError(f"{where}.{key} names unknown node {entry.get(key)!r}")
        override = LinkModel(
            _delay(_section(entry, "delay", _DELAY, where), f"{where}.delay", delay),
            drop=_number(entry, "drop", link.drop, where),
            dup=_number(entry, "dup", link.dup, where),
        )
        links.append(((entry["src"], entry["dst"]), override))

    partitions = []
    for i, entry in enumerate(net.get("partitions") or []):
        where = f"network.partitions[{i}]"
        entry = _mapping(entry, where)
        unknown = sorted(set(entry) - _PARTITION)
        if unknown:
            raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
        side = entry.get("side") or []
        missing = sorted(set(map(str, side)) - set(n_nodes))
        if missing:
            raise ConfigError(f"{where}.side names unknown nodes {missing}")
        partitions.append(Partition(_number(entry, "start", 0.0, where, minimum=0),
                                    _number(entry, "end", 0.0, where, minimum=0),
                                    frozenset(map(str, side))))

    timeouts = _section(net, "timeouts", _TIMEOUTS, "network")
    defaults = Timeouts()
    timeouts = Timeouts(_number(timeouts, "phase", defaults.phase, "network.timeouts"),
                        _number(timeouts, "conflict", defaults.conflict, "network.timeouts"))
    return link, tuple(links), tuple(partitions), timeouts


def _workload(data: dict) -> WorkloadSpec:
    section = _section(data, "workload", _WORKLOAD)
    d = WorkloadSpec()
    return WorkloadSpec(
        rate=_number(section, "rate", d.rate, "workload", minimum=0),
        duration=_number(section, "duration", d.duration, "workload", minimum=0),
        clients=_number(section, "clients", d.clients, "workload", kind=int, minimum=1),
        conflict_fraction=_number(section, "conflict_fraction", d.conflict_fraction, "workload"),
        interval=section.get("interval", d.interval),
        race_gap_ms=_number(section, "race_gap_ms", d.race_gap_ms, "workload", minimum=0),
        drain_ms=_number(section, "drain_ms", d.drain_ms, "workload", minimum=0),
    )


def _checker(data: dict) -> CheckerSettings:
    section = _section(data, "checker", _CHECKER)
    d = CheckerSettings()
    return CheckerSettings(
        seeds=_number(section, "seeds", d.seeds, "checker", kind=int, minimum=0),
        depth=_number(section, "depth", d.depth, "checker", kind=int, minimum=0),
        max_states=_number(section, "max_states", d.max_states, "checker", kind=int, minimum=1),
        random_partitions=_flag(section, "random_partitions", d.random_partitions, "checker"),
        values=_number(section, "values", d.values, "checker", kind=int, minimum=1),
        rounds=_number(section, "rounds", d.rounds, "checker", kind=int, minimum=1),
    )


# ============================================================================
# Entry points
# ============================================================================

def parse_config(data: Any, source: str = "<config>") -> Config:
    data = _mapping(data, source)
    unknown = sorted(set(data) - _TOP)
    if unknown:
        raise ConfigError(f"{source}: unknown top-level key(s): {', '.join(map(str, unknown))}")

    cluster = _section(data, "cluster", _CLUSTER)
    if "n" not in cluster:
        raise ConfigError(f"{source}: cluster.n is required")
    n = _number(cluster, "n", None, "cluster", kind=int, minimum=1)
    proposers = _number(cluster, "proposers", 1, "cluster", kind=int, minimum=1)
    learners = _number(cluster, "learners", 1, "cluster", kind=int, minimum=0)

    scheme, system, engine, raw = _quorums(data, n)

    rounds = _section(data, "rounds", _ROUNDS)
    classify = rounds.get("classify", "even-fast" if scheme in FAST_SCHEMES else "all-classic")
    try:
        round_config = RoundConfig(proposers, classify, rounds.get("owner", "modulo"))
    except FFPaxosError as exc:
        raise ConfigError(f"rounds: {exc}") from exc

    nodes = ([f"a{i}" for i in range(n)] + [f"p{i}" for i in range(proposers)] +
             [f"l{i}" for i in range(learners)])
    link, links, partitions, timeouts = _network(data, nodes)

    seed = _number(data, "seed", 0, source, kind=int, minimum=0)
    config = Config(
        n=n,
        scheme=scheme,
        system=system,
        engine_system=engine,
        name=str(data.get("name") or Path(source).stem),
        seed=seed,
        allow_invalid=_flag(data, "allow_invalid", False, source),
        proposers=proposers,
        learners=learners,
        rounds=round_config,
        prearm=_flag(rounds, "prearm", True, "rounds"),
        link=link,
        links=links,
        partitions=partitions,
        timeouts=timeouts,
        workload=_workload(data),
        checker=_checker(data),
        raw_quorums=raw,
    )
    # surfaces partition/link problems at load time
    config.sim_config()
    return config


def load_config(path: Union[str, Path]) -> Config:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    logger.debug("loaded config %s", path)
    return parse_config(data, str(path))
