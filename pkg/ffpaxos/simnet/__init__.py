"""Deterministic discrete-event simulation of a cluster running the core protocol."""

from ffpaxos.simnet.engine import Simulation, check_system, run
from ffpaxos.simnet.model import DelayModel, LinkModel, Partition, SimConfig, Timeouts
from ffpaxos.simnet.network import Draw, Outcome, Schedule, deliver_schedule
from ffpaxos.simnet.trace import Record, Trace

__all__ = [
    "DelayModel", "Draw", "LinkModel", "Outcome", "Partition", "Record", "Schedule",
    "SimConfig", "Simulation", "Timeouts", "Trace", "check_system", "deliver_schedule", "run",
]
