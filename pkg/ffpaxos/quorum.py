"""
Quorum systems for ffpaxos

A quorum system is given either by cardinality (every set of at least q_k
acceptors is a quorum) or by explicit families of node sets. Explicit
families are superset-closed: any set containing a declared quorum is a
quorum too.

Validators cover the four requirement sets the protocol family relies on:

    paxos          any two quorums intersect
    flexible       every phase-1 quorum meets every phase-2 quorum
    fast-paxos     classic pairs, classic+two fast, three fast quorums intersect
    fast-flexible  phase-1 meets every classic phase-2 quorum and every
                   pair of fast phase-2 quorums

Cardinality systems are checked with the closed-form inequalities; explicit
systems and the brute-force oracle enumerate quorums with numpy bitmasks.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ffpaxos.errors import BoundExceededError, QuorumError, UsageError

logger = logging.getLogger(__name__)

NodeSet = FrozenSet[int]
FamilySpec = Union[int, Iterable[Iterable[int]]]

DEFAULT_BRUTE_FORCE_BOUND = 12

# Bitmask enumeration stays in int64
_MASK_BITS = 62
# Rows of the phase-1 family handled per numpy block
_BLOCK = 256


# ============================================================================
# Enums
# ============================================================================

class Family(Enum):
    """Quorum families of a Fast Flexible Paxos system"""
    P1 = "P1"
    P2C = "P2C"
    P2F = "P2F"


class LegacyFamily(Enum):
    """Quorum families of a Fast Paxos system"""
    CLASSIC = "C"
    FAST = "F"


class Kind(Enum):
    CARDINALITY = "cardinality"
    EXPLICIT = "explicit"


class Scheme(Enum):
    """Which requirement set a report was checked against"""
    PAXOS = "paxos"
    FLEXIBLE = "flexible"
    FAST = "fast-paxos"
    FAST_FLEXIBLE = "fast-flexible"


# Stable requirement ids used in violations
PAXOS_PAIRS = "paxos-pairs"
FLEXIBLE_PHASES = "flexible-phases"
CLASSIC_PAIRS = "classic-pairs"
CLASSIC_FAST_FAST = "classic-fast-fast"
FAST_TRIPLES = "fast-triples"
PHASE1_CLASSIC = "phase1-classic"
PHASE1_FAST_PAIR = "phase1-fast-pair"

# Cardinality form of each requirement, shown next to the id in verdict lines
REQUIREMENT_LABELS = {
    PAXOS_PAIRS: "2q > n",
    FLEXIBLE_PHASES: "q1+q2 > n",
    CLASSIC_PAIRS: "2qc > n",
    CLASSIC_FAST_FAST: "qc+2qf > 2n",
    FAST_TRIPLES: "3qf > 2n",
    PHASE1_CLASSIC: "q1+q2c > n",
    PHASE1_FAST_PAIR: "q1+2q2f > 2n",
}


def as_family(family: Union[Family, str]) -> Family:
    if isinstance(family, Family):
        return family
    try:
        return Family(str(family).upper())
    except ValueError:
        raise UsageError(f"unknown quorum family {family!r} (expected P1, P2C or P2F)") from None


def as_legacy_family(family: Union[LegacyFamily, str]) -> LegacyFamily:
    if isinstance(family, LegacyFamily):
        return family
    text = str(family).upper()
    for member in LegacyFamily:
        if text in (member.value, member.name):
            return member
    raise UsageError(f"unknown quorum family {family!r} (expected CLASSIC or FAST)")


# ============================================================================
# Family helpers
# ============================================================================

def _check_size(n: int, name: str, q) -> int:
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)):
        raise QuorumError(f"{name} must be an integer, got {q!r}")
    q = int(q)
    if q < 1 or q > n:
        raise QuorumError(f"{name}={q} must be in [1, {n}]")
    return q


def _check_sets(n: int, name: str, family: Iterable[Iterable[int]]) -> FrozenSet[NodeSet]:
    out = set()
    for quorum in family:
        s = frozenset(int(x) for x in quorum)
        if not s:
            raise QuorumError(f"{name} contains an empty quorum")
        outside = sorted(x for x in s if not 0 <= x < n)
        if outside:
            raise QuorumError(f"{name} quorum {sorted(s)} names nodes {outside} outside [0, {n})")
        out.add(s)
    if not out:
        raise QuorumError(f"{name} must contain at least one quorum")
    return frozenset(out)


def ordered(family: Iterable[NodeSet]) -> List[NodeSet]:
    """Deterministic order: by size, then by sorted members"""
    return sorted(family, key=lambda s: (len(s), sorted(s)))


def minimal_sets(family: Iterable[NodeSet]) -> List[NodeSet]:
    """Drop every set that strictly contains another set of the family"""
    sets = ordered(set(family))
    keep: List[NodeSet] = []
    for s in sets:
        if not any(k < s for k in keep):
            keep.append(s)
    return keep


def _combinations(n: int, q: int) -> List[NodeSet]:
    return [frozenset(c) for c in itertools.combinations(range(n), q)]


def _as_tuple(s: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(s))


def _within(n: int, s: NodeSet) -> NodeSet:
    if s and (min(s) < 0 or max(s) >= n):
        outside = sorted(x for x in s if not 0 <= x < n)
        raise UsageError(f"node set names nodes {outside} outside [0, {n})")
    return s


# ============================================================================
# Quorum systems
# ============================================================================

@dataclass(frozen=True)
class QuorumSystem:
    """Phase-1, classic phase-2 and fast phase-2 quorums over acceptors [0, n)"""
    n: int
    kind: Kind
    q1: Optional[int] = None
    q2c: Optional[int] = None
    q2f: Optional[int] = None
    q1_sets: FrozenSet[NodeSet] = frozenset()
    q2c_sets: FrozenSet[NodeSet] = frozenset()
    q2f_sets: FrozenSet[NodeSet] = frozenset()

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise QuorumError(f"cluster size n must be a positive integer, got {self.n!r}")
        if self.kind is Kind.CARDINALITY:
            for name in ("q1", "q2c", "q2f"):
                object.__setattr__(self, name, _check_size(self.n, name, getattr(self, name)))
        else:
            for name in ("q1_sets", "q2c_sets", "q2f_sets"):
                object.__setattr__(self, name, _check_sets(self.n, name, getattr(self, name)))

    @classmethod
    def cardinality(cls, n: int, q1: int, q2c: int, q2f: int) -> "QuorumSystem":
        return cls(n=n, kind=Kind.CARDINALITY, q1=q1, q2c=q2c, q2f=q2f)

    @classmethod
    def explicit(cls, n: int, Q1, Q2c, Q2f) -> "QuorumSystem":
        return cls(n=n, kind=Kind.EXPLICIT, q1_sets=Q1, q2c_sets=Q2c, q2f_sets=Q2f)

    @property
    def nodes(self) -> NodeSet:
        return frozenset(range(self.n))

    def size(self, family) -> Optional[int]:
        return {Family.P1: self.q1, Family.P2C: self.q2c, Family.P2F: self.q2f}[as_family(family)]

    def sets(self, family) -> FrozenSet[NodeSet]:
        return {Family.P1: self.q1_sets, Family.P2C: self.q2c_sets,
                Family.P2F: self.q2f_sets}[as_family(family)]

    def is_quorum(self, family, s: Iterable[int]) -> bool:
        family = as_family(family)
        s = _within(self.n, s if isinstance(s, frozenset) else frozenset(s))
        if self.kind is Kind.CARDINALITY:
            return len(s) >= self.size(family)
        return any(q <= s for q in self.sets(family))

    def minimal_quorums(self, family) -> List[NodeSet]:
        family = as_family(family)
        if self.kind is Kind.CARDINALITY:
            return _combinations(self.n, self.size(family))
        return minimal_sets(self.sets(family))

    def min_size(self, family) -> int:
        family = as_family(family)
        if self.kind is Kind.CARDINALITY:
            return self.size(family)
        return min(len(s) for s in self.sets(family))

    def fault_tolerance(self) -> Dict[str, int]:
        return {f.value: self.n - self.min_size(f) for f in Family}

    def as_legacy(self) -> "LegacyQuorumSystem":
        """Fast Paxos reading: classic quorums serve both phases, fast quorums stay."""
        if self.kind is Kind.CARDINALITY:
            return LegacyQuorumSystem.cardinality(self.n, min(self.q1, self.q2c), self.q2f)
        return LegacyQuorumSystem.explicit(self.n, self.q1_sets | self.q2c_sets, self.q2f_sets)

    def describe(self) -> str:
        if self.kind is Kind.CARDINALITY:
            return f"n={self.n} q1={self.q1} q2c={self.q2c} q2f={self.q2f}"
        return (f"n={self.n} |Q1|={len(self.q1_sets)} |Q2c|={len(self.q2c_sets)} "
                f"|Q2f|={len(self.q2f_sets)}")

    def to_dict(self) -> dict:
        if self.kind is Kind.CARDINALITY:
            return {"scheme": Scheme.FAST_FLEXIBLE.value, "n": self.n,
                    "q1": self.q1, "q2c": self.q2c, "q2f": self.q2f}
        return {"scheme": Scheme.FAST_FLEXIBLE.value, "n": self.n,
                "Q1": [sorted(s) for s in ordered(self.q1_sets)],
                "Q2c": [sorted(s) for s in ordered(self.q2c_sets)],
                "Q2f": [sorted(s) for s in ordered(self.q2f_sets)]}


@dataclass(frozen=True)
class LegacyQuorumSystem:
    """Fast Paxos quorums: one classic family and one fast family"""
    n: int
    kind: Kind
    qc: Optional[int] = None
    qf: Optional[int] = None
    qc_sets: FrozenSet[NodeSet] = frozenset()
    qf_sets: FrozenSet[NodeSet] = frozenset()

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise QuorumError(f"cluster size n must be a positive integer, got {self.n!r}")
        if self.kind is Kind.CARDINALITY:
            object.__setattr__(self, "qc", _check_size(self.n, "qc", self.qc))
            object.__setattr__(self, "qf", _check_size(self.n, "qf", self.qf))
        else:
            object.__setattr__(self, "qc_sets", _check_sets(self.n, "Qc", self.qc_sets))
            object.__setattr__(self, "qf_sets", _check_sets(self.n, "Qf", self.qf_sets))

    @classmethod
    def cardinality(cls, n: int, qc: int, qf: int) -> "LegacyQuorumSystem":
        return cls(n=n, kind=Kind.CARDINALITY, qc=qc, qf=qf)

    @classmethod
    def explicit(cls, n: int, Qc, Qf) -> "LegacyQuorumSystem":
        return cls(n=n, kind=Kind.EXPLICIT, qc_sets=Qc, qf_sets=Qf)

    def is_quorum(self, family, s: Iterable[int]) -> bool:
        family = as_legacy_family(family)
        s = _within(self.n, frozenset(s))
        if self.kind is Kind.CARDINALITY:
            return len(s) >= (self.qc if family is LegacyFamily.CLASSIC else self.qf)
        sets = self.qc_sets if family is LegacyFamily.CLASSIC else self.qf_sets
        return any(q <= s for q in sets)

    def minimal_quorums(self, family) -> List[NodeSet]:
        family = as_legacy_family(family)
        if self.kind is Kind.CARDINALITY:
            return _combinations(self.n, self.qc if family is LegacyFamily.CLASSIC else self.qf)
        return minimal_sets(self.qc_sets if family is LegacyFamily.CLASSIC else self.qf_sets)

    def min_size(self, family) -> int:
        family = as_legacy_family(family)
        if self.kind is Kind.CARDINALITY:
            return self.qc if family is LegacyFamily.CLASSIC else self.qf
        sets = self.qc_sets if family is LegacyFamily.CLASSIC else self.qf_sets
        return min(len(s) for s in sets)

    def fault_tolerance(self) -> Dict[str, int]:
        return {f.value: self.n - self.min_size(f) for f in LegacyFamily}

    def as_fast_flexible(self) -> QuorumSystem:
        """Run a Fast Paxos system on the generic core: phase-1 uses classic quorums."""
        if self.kind is Kind.CARDINALITY:
            return QuorumSystem.cardinality(self.n, self.qc, self.qc, self.qf)
        return QuorumSystem.explicit(self.n, self.qc_sets, self.qc_sets, self.qf_sets)

    def describe(self) -> str:
        if self.kind is Kind.CARDINALITY:
            return f"n={self.n} qc={self.qc} qf={self.qf}"
        return f"n={self.n} |Qc|={len(self.qc_sets)} |Qf|={len(self.qf_sets)}"

    def to_dict(self) -> dict:
        if self.kind is Kind.CARDINALITY:
            return {"scheme": Scheme.FAST.value, "n": self.n, "qc": self.qc, "qf": self.qf}
        return {"scheme": Scheme.FAST.value, "n": self.n,
                "Qc": [sorted(s) for s in ordered(self.qc_sets)],
                "Qf": [sorted(s) for s in ordered(self.qf_sets)]}


# ============================================================================
# Reports
# ============================================================================

@dataclass(frozen=True)
class Violation:
    """One failed requirement with a concrete witness"""
    requirement: str
    witness: Tuple[Tuple[int, ...], ...] = ()
    inequality: str = ""

    @property
    def label(self) -> str:
        """Requirement id, with its inequality when the system is given by sizes"""
        if self.inequality:
            return f"{self.requirement}: {REQUIREMENT_LABELS[self.requirement]}"
        return self.requirement

    def render(self) -> str:
        parts = [self.requirement]
        if self.inequality:
            parts.append(self.inequality)
        if self.witness:
            parts.append("witness " + " & ".join("{" + ",".join(map(str, q)) + "}"
                                                 for q in self.witness) + " = {}")
        return ": ".join(parts)

    def to_record(self) -> dict:
        return {
            "requirement": self.requirement,
            "witness": [list(q) for q in self.witness],
            "inequality": self.inequality,
        }


@dataclass(frozen=True)
class ValidationReport:
    scheme: Scheme
    violations: Tuple[Violation, ...] = ()
    fault_tolerance: Dict[str, int] = field(default_factory=dict)
    method: str = "inequality"

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "VALID" if self.valid else "INVALID"

    def render(self) -> str:
        line = f"{self.scheme.value}: {self.verdict}"
        if self.violations:
            ids = ", ".join(dict.fromkeys(v.label for v in self.violations))
            line += f" ({ids})"
        lines = [line]
        lines.extend("  " + v.render() for v in self.violations)
        return "\n".join(lines)

    def to_record(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "verdict": self.verdict,
            "method": self.method,
            "violations": [v.to_record() for v in self.violations],
            "fault_tolerance": dict(self.fault_tolerance),
        }


# ============================================================================
# Witness construction (cardinality form)
# ============================================================================

def _disjoint_pair(n: int, a: int, b: int) -> Tuple[Tuple[int, ...], ...]:
    """Sizes a + b <= n: first a nodes and last b nodes"""
    return tuple(range(a)), tuple(range(n - b, n))


def _empty_triple(n: int, a: int, b: int, c: int) -> Tuple[Tuple[int, ...], ...]:
    """Sizes a + b + c <= 2n: the b/c overlap is placed outside the first set"""
    t = max(0, b + c - n)
    shared = list(range(a, a + t))
    rest = [x for x in range(n) if x not in shared]
    second = sorted(shared + rest[:b - t])
    third = sorted(shared + rest[len(rest) - (c - t):]) if c - t else sorted(shared)
    return tuple(range(a)), tuple(second), tuple(third)


# ============================================================================
# Enumeration
# ============================================================================

def _masks(sets: Sequence[NodeSet]) -> np.ndarray:
    return np.array([sum(1 << x for x in s) for s in sets], dtype=np.int64)


def find_disjoint_pair(first: Sequence[NodeSet], second: Sequence[NodeSet],
                       n: int) -> Optional[Tuple[NodeSet, NodeSet]]:
    """First (Q, Q') with Q ∩ Q' = {} in enumeration order, or None"""
    if n > _MASK_BITS:
        for q, r in itertools.product(first, second):
            if not q & r:
                return q, r
        return None
    a, b = _masks(first), _masks(second)
    for start in range(0, len(first), _BLOCK):
        hits = (a[start:start + _BLOCK, None] & b[None, :]) == 0
        if hits.any():
            i, j = np.argwhere(hits)[0]
            return first[start + int(i)], second[int(j)]
    return None


def find_empty_triple(first: Sequence[NodeSet], second: Sequence[NodeSet],
                      third: Sequence[NodeSet], n: int
                      ) -> Optional[Tuple[NodeSet, NodeSet, NodeSet]]:
    """First (Q, Q', Q'') with empty common intersection, or None"""
    if n > _MASK_BITS:
        for q, r, s in itertools.product(first, second, third):
            if not q & r & s:
                return q, r, s
        return None
    b, c = _masks(second), _masks(third)
    pairs = (b[:, None] & c[None, :]).ravel()
    # at most 2^n distinct pair intersections survive
    uniq, first_index = np.unique(pairs, return_index=True)
    a = _masks(first)
    for start in range(0, len(first), _BLOCK):
        hits = (a[start:start + _BLOCK, None] & uniq[None, :]) == 0
        if hits.any():
            i, u = np.argwhere(hits)[0]
            j, k = divmod(int(first_index[int(u)]), len(third))
            return first[start + int(i)], second[j], third[k]
    return None


def _pair_violation(requirement, found) -> Optional[Violation]:
    if found is None:
        return None
    return Violation(requirement, witness=tuple(_as_tuple(q) for q in found))


# ============================================================================
# Validators
# ============================================================================

def _family(n: int, name: str, spec: FamilySpec) -> Tuple[Optional[int], List[NodeSet]]:
    """Cardinality spec -> (q, []); explicit spec -> (None, declared sets)"""
    if isinstance(spec, (int, np.integer)) and not isinstance(spec, bool):
        return _check_size(n, name, spec), []
    return None, ordered(_check_sets(n, name, spec))


def validate_paxos(n: int, q: FamilySpec) -> ValidationReport:
    """Any two quorums intersect"""
    size, sets = _family(n, "q", q)
    if size is not None:
        violations = ()
        if not 2 * size > n:
            violations = (Violation(PAXOS_PAIRS, witness=_disjoint_pair(n, size, size),
                                    inequality=f"2*{size}={2 * size} <= {n}"),)
        return ValidationReport(Scheme.PAXOS, violations, {"Q": n - size})
    found = _pair_violation(PAXOS_PAIRS, find_disjoint_pair(sets, sets, n))
    return ValidationReport(Scheme.PAXOS, tuple(v for v in (found,) if v),
                            {"Q": n - min(len(s) for s in sets)}, method="enumeration")


def validate_flexible(n: int, q1: FamilySpec, q2: FamilySpec) -> ValidationReport:
    """Every phase-1 quorum meets every phase-2 quorum"""
    size1, sets1 = _family(n, "q1", q1)
    size2, sets2 = _family(n, "q2", q2)
    if size1 is not None and size2 is not None:
        violations = ()
        if not size1 + size2 > n:
            violations = (Violation(FLEXIBLE_PHASES, witness=_disjoint_pair(n, size1, size2),
                                    inequality=f"{size1}+{size2}={size1 + size2} <= {n}"),)
        return ValidationReport(Scheme.FLEXIBLE, violations,
                                {"P1": n - size1, "P2": n - size2})
    sets1 = sets1 or _combinations(n, size1)
    sets2 = sets2 or _combinations(n, size2)
    found = _pair_violation(FLEXIBLE_PHASES, find_disjoint_pair(sets1, sets2, n))
    return ValidationReport(
        Scheme.FLEXIBLE, tuple(v for v in (found,) if v),
        {"P1": n - min(map(len, sets1)), "P2": n - min(map(len, sets2))},
        method="enumeration")


def validate_fast_paxos(lqs: LegacyQuorumSystem) -> ValidationReport:
    """Classic pairs, classic with two fast, and three fast quorums all intersect"""
    n = lqs.n
    if lqs.kind is Kind.CARDINALITY:
        qc, qf = lqs.qc, lqs.qf
        violations = []
        if not 2 * qc > n:
            violations.append(Violation(CLASSIC_PAIRS, witness=_disjoint_pair(n, qc, qc),
                                        inequality=f"2*{qc}={2 * qc} <= {n}"))
        if not qc + 2 * qf > 2 * n:
            violations.append(Violation(CLASSIC_FAST_FAST, witness=_empty_triple(n, qc, qf, qf),
                                        inequality=f"{qc}+2*{qf}={qc + 2 * qf} <= {2 * n}"))
        if not 3 * qf > 2 * n:
            violations.append(Violation(FAST_TRIPLES, witness=_empty_triple(n, qf, qf, qf),
                                        inequality=f"3*{qf}={3 * qf} <= {2 * n}"))
        return ValidationReport(Scheme.FAST, tuple(violations), lqs.fault_tolerance())

    classic = lqs.minimal_quorums(LegacyFamily.CLASSIC)
    fast = lqs.minimal_quorums(LegacyFamily.FAST)
    checks = (
        _pair_violation(CLASSIC_PAIRS, find_disjoint_pair(classic, classic, n)),
        _pair_violation(CLASSIC_FAST_FAST, find_empty_triple(classic, fast, fast, n)),
        _pair_violation(FAST_TRIPLES, find_empty_triple(fast, fast, fast, n)),
    )
    return ValidationReport(Scheme.FAST, tuple(v for v in checks if v),
                            lqs.fault_tolerance(), method="enumeration")


def _enumerate_fast_flexible(qs: QuorumSystem, families, method: str) -> ValidationReport:
    phase1, classic, fast = families
    checks = (
        _pair_violation(PHASE1_CLASSIC, find_disjoint_pair(phase1, classic, qs.n)),
        _pair_violation(PHASE1_FAST_PAIR, find_empty_triple(phase1, fast, fast, qs.n)),
    )
    return ValidationReport(Scheme.FAST_FLEXIBLE, tuple(v for v in checks if v),
                            qs.fault_tolerance(), method=method)


def validate_fast_flexible(qs: QuorumSystem) -> ValidationReport:
    """Phase-1 quorums meet every classic phase-2 quorum and every pair of fast ones"""
    n = qs.n
    if qs.kind is Kind.CARDINALITY:
        q1, q2c, q2f = qs.q1, qs.q2c, qs.q2f
        violations = []
        if not q1 + q2c > n:
            violations.append(Violation(PHASE1_CLASSIC, witness=_disjoint_pair(n, q1, q2c),
                                        inequality=f"{q1}+{q2c}={q1 + q2c} <= {n}"))
        if not q1 + 2 * q2f > 2 * n:
            violations.append(Violation(PHASE1_FAST_PAIR, witness=_empty_triple(n, q1, q2f, q2f),
                                        inequality=f"{q1}+2*{q2f}={q1 + 2 * q2f} <= {2 * n}"))
        return ValidationReport(Scheme.FAST_FLEXIBLE, tuple(violations), qs.fault_tolerance())
    families = tuple(qs.minimal_quorums(f) for f in Family)
    return _enumerate_fast_flexible(qs, families, "enumeration")


def brute_force_check(qs: QuorumSystem,
                      bound: int = DEFAULT_BRUTE_FORCE_BOUND) -> ValidationReport:
    """Oracle: enumerate every pair and triple of minimal quorums literally."""
    if qs.n > bound:
        raise BoundExceededError("n", qs.n, bound)
    families = tuple(qs.minimal_quorums(f) for f in Family)
    logger.debug("brute force over %s: %s minimal quorums", qs.describe(),
                 [len(f) for f in families])
    return _enumerate_fast_flexible(qs, families, "brute-force")


def witness_holds(violation: Violation) -> bool:
    """Re-test a witness: its quorums really have an empty common intersection."""
    if not violation.witness:
        return False
    sets = [frozenset(q) for q in violation.witness]
    return not frozenset.intersection(*sets)


# ============================================================================
# Configuration helpers
# ============================================================================

def fast_paxos_suggestions(n: int) -> List[LegacyQuorumSystem]:
    """The two classic Fast Paxos sizings for n acceptors"""
    two_thirds = 2 * n // 3 + 1
    majority = n // 2 + 1
    three_quarters = -(-3 * n // 4)
    return [
        LegacyQuorumSystem.cardinality(n, two_thirds, two_thirds),
        LegacyQuorumSystem.cardinality(n, majority, min(n, three_quarters)),
    ]


def minimal_phase2(n: int, q1: int) -> QuorumSystem:
    """Smallest classic and fast phase-2 quorums that are valid alongside q1"""
    q1 = _check_size(n, "q1", q1)
    q2c = n - q1 + 1
    q2f = min(n, (2 * n - q1) // 2 + 1)
    return QuorumSystem.cardinality(n, q1, q2c, q2f)


def derive_table(n: int) -> List[QuorumSystem]:
    return [minimal_phase2(n, q1) for q1 in range(1, n + 1)]
