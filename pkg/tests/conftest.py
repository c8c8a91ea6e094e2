from pathlib import Path

import pytest

from ffpaxos.core.rounds import RoundConfig
from ffpaxos.quorum import LegacyQuorumSystem, QuorumSystem

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def ffp_973() -> QuorumSystem:
    """Eleven acceptors, phase-1 of nine, classic of three, fast of seven"""
    return QuorumSystem.cardinality(11, 9, 3, 7)


@pytest.fixture
def fp_69() -> LegacyQuorumSystem:
    return LegacyQuorumSystem.cardinality(11, 6, 9)


@pytest.fixture
def even_fast() -> RoundConfig:
    return RoundConfig(proposers=1, classify_rule="even-fast")
