"""
ffpaxos - Fast Flexible Paxos over pluggable quorum systems.

Protocol state machines, a deterministic network simulator, safety
checkers and a latency/conflict benchmark harness.
"""

__version__ = "0.1.0"

from ffpaxos.errors import (
    BoundExceededError, ConfigError, FFPaxosError, InvalidSystemError, ProtocolError,
    QuorumError, UsageError,
)
from ffpaxos.quorum import (
    LegacyQuorumSystem, QuorumSystem, ValidationReport, brute_force_check,
    validate_fast_flexible, validate_fast_paxos, validate_flexible, validate_paxos,
)
from ffpaxos.workload import WorkloadSpec

__all__ = [
    "BoundExceededError", "ConfigError", "FFPaxosError", "InvalidSystemError",
    "LegacyQuorumSystem", "ProtocolError", "QuorumError", "QuorumSystem", "UsageError",
    "ValidationReport", "WorkloadSpec", "__version__", "brute_force_check",
    "validate_fast_flexible", "validate_fast_paxos", "validate_flexible", "validate_paxos",
]
