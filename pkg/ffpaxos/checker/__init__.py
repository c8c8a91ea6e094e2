"""Safety checking: trace monitors, seed exploration, exhaustive search, scripted counterexamples."""

from ffpaxos.checker.exhaustive import ExhaustiveSummary, TinyModel, exhaustive_explore
from ffpaxos.checker.explore import ExploreSummary, explore
from ffpaxos.checker.monitors import INVARIANTS, MonitorVerdict, failures, monitor, replays
from ffpaxos.checker.o4 import O4Summary, o4_trials
from ffpaxos.checker.scenarios import CATALOG, scripted_counterexample

__all__ = [
    "CATALOG", "ExhaustiveSummary", "ExploreSummary", "INVARIANTS", "MonitorVerdict",
    "O4Summary", "TinyModel", "exhaustive_explore", "explore", "failures", "monitor",
    "o4_trials", "replays", "scripted_counterexample",
]
