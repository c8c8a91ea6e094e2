"""
Terminal rendering of reports, verdicts and benchmark results.

Everything here builds ``rich`` renderables; the CLI prints them on a
stdout console. Plain-text output (pipes, tests) drops the styling.
"""

from typing import Iterable, List, Optional, Sequence

from rich.console import Console
from rich.markup import escape
from rich.table import Table
from rich.text import Text

from ffpaxos.bench import BenchResult, Comparison, SweepRow
from ffpaxos.checker.exhaustive import ExhaustiveSummary
from ffpaxos.checker.explore import ExploreSummary
from ffpaxos.checker.monitors import MonitorVerdict
from ffpaxos.checker.o4 import O4Summary
from ffpaxos.quorum import QuorumSystem, ValidationReport

VERDICT_STYLE = {
    "VALID": "bold green",
    "INVALID": "bold red",
    "pass": "green",
    "fail": "bold red",
}

# metric -> (label, format)
BENCH_METRICS = {
    "instances": ("instances", "{:d}"),
    "decided": ("decided", "{:d}"),
    "undecided": ("undecided", "{:d}"),
    "mean_ms": ("mean latency (ms)", "{:.3f}"),
    "median_ms": ("median latency (ms)", "{:.3f}"),
    "p99_ms": ("p99 latency (ms)", "{:.3f}"),
    "fast_median_ms": ("fast-path median (ms)", "{:.3f}"),
    "throughput": ("throughput (req/s)", "{:.1f}"),
    "races": ("injected races", "{:d}"),
    "fast_wins": ("fast wins", "{:d}"),
    "recoveries": ("recoveries", "{:d}"),
    "conflict_probability": ("conflict probability", "{:.3f}"),
    "realized_conflict_rate": ("realized conflict rate", "{:.4f}"),
    "messages": ("messages", "{:d}"),
    "bytes_per_instance": ("bytes / instance", "{:.1f}"),
}


def make_console(**kwargs) -> Console:
    return Console(highlight=False, **kwargs)


def _styled(word: str) -> Text:
    return Text(word, style=VERDICT_STYLE.get(word, ""))


def _number(value, fmt: str) -> str:
    if value is None:
        return "-"
    if "d" in fmt:
        return fmt.format(int(value))
    return fmt.format(value)


# ============================================================================
# Quorum reports
# ============================================================================

def report_text(report: ValidationReport) -> Text:
    """The report's one-line verdict and witness lines, verdict coloured"""
    text = Text()
    head, *rest = report.render().split("\n")
    scheme, _, tail = head.partition(": ")
    text.append(f"{scheme}: ")
    verdict, _, ids = tail.partition(" ")
    text.append(verdict, style=VERDICT_STYLE[verdict])
    if ids:
        text.append(f" {ids}")
    for line in rest:
        text.append("\n" + line, style="dim")
    return text


def compare_table(reports: Sequence[ValidationReport], title: str = "") -> Table:
    table = Table(title=title or None, show_header=True)
    table.add_column("Scheme", style="cyan")
    table.add_column("Verdict")
    table.add_column("Violated")
    table.add_column("Tolerates", justify="right")
    for report in reports:
        ids = ", ".join(dict.fromkeys(v.requirement for v in report.violations)) or "-"
        tolerance = " ".join(f"{k}:{v}" for k, v in report.fault_tolerance.items())
        table.add_row(report.scheme.value, _styled(report.verdict), escape(ids), tolerance)
    return table


def derive_table(n: int, rows: Iterable[QuorumSystem]) -> Table:
    table = Table(title=f"Smallest phase-2 quorums for n={n}", show_header=True)
    for name in ("q1", "q2c", "q2f"):
        table.add_column(name, justify="right")
    table.add_column("Tolerates (P1/P2C/P2F)", justify="right")
    for qs in rows:
        ft = qs.fault_tolerance()
        table.add_row(str(qs.q1), str(qs.q2c), str(qs.q2f),
                      f"{ft['P1']}/{ft['P2C']}/{ft['P2F']}")
    return table


# ============================================================================
# Checker output
# ============================================================================

def verdict_table(verdicts: Sequence[MonitorVerdict]) -> Table:
    table = Table(show_header=True)
    table.add_column("Invariant", style="cyan")
    table.add_column("Verdict")
    table.add_column("Detail")
    for v in verdicts:
        table.add_row(v.invariant, _styled(v.verdict), escape(v.detail))
    return table


def explore_table(summary: ExploreSummary, limit: int = 20) -> List:
    head = Table(show_header=False, box=None)
    head.add_column(style="cyan")
    head.add_column(justify="right")
    head.add_row("seeds", str(summary.seeds_run))
    head.add_row("instances", str(summary.instances))
    head.add_row("decided", str(summary.decided))
    head.add_row("events", str(summary.events))
    head.add_row("violations", Text(str(len(summary.violations)),
                                    style="green" if summary.clean else "bold red"))
    out = [head]
    if summary.violations:
        table = Table(title="Violations", show_header=True)
        table.add_column("Seed", justify="right")
        table.add_column("Invariant", style="cyan")
        table.add_column("Detail")
        for v in summary.violations[:limit]:
            table.add_row(str(v.seed), v.invariant, escape(v.detail))
        out.append(table)
    return out


def exhaustive_table(summary: ExhaustiveSummary) -> List:
    head = Table(show_header=False, box=None)
    head.add_column(style="cyan")
    head.add_column(justify="right")
    head.add_row("states", str(summary.states))
    head.add_row("transitions", str(summary.transitions))
    head.add_row("max depth", str(summary.max_depth))
    head.add_row("coverage", Text("complete" if summary.complete else "partial",
                                  style="green" if summary.complete else "yellow"))
    head.add_row("violations", Text(str(len(summary.violations)),
                                    style="green" if summary.clean else "bold red"))
    out = [head]
    for v in summary.violations:
        text = Text(f"{v.invariant}: ", style="bold red")
        text.append(v.detail)
        for i, action in enumerate(v.path, 1):
            text.append(f"\n  {i:2d}. {action}")
        out.append(text)
    return out


def o4_text(summary: O4Summary) -> Text:
    text = Text(f"o4 trials: {summary.trials} ({summary.explicit} explicit), largest O4 "
                f"{summary.max_size}, ")
    text.append(f"{len(summary.failures)} failure(s)",
                style="green" if summary.clean else "bold red")
    return text


# ============================================================================
# Bench output
# ============================================================================

def bench_table(results: Sequence[BenchResult], ratios: Optional[dict] = None) -> Table:
    table = Table(show_header=True)
    table.add_column("Metric", style="cyan")
    for result in results:
        table.add_column(escape(result.name), justify="right")
    if ratios is not None:
        table.add_column("ratio", justify="right", style="magenta")
    for metric, (label, fmt) in BENCH_METRICS.items():
        row = [label] + [_number(r.aggregates.get(metric), fmt) for r in results]
        if ratios is not None:
            row.append(_number(ratios.get(metric), "{:.3f}"))
        table.add_row(*row)
    return table


def comparison_table(comparison: Comparison) -> Table:
    return bench_table([comparison.primary, comparison.baseline], comparison.ratios)


def sweep_table(rows: Sequence[SweepRow]) -> Table:
    table = Table(title="Conflict probability by race gap", show_header=True)
    table.add_column("Config", style="cyan")
    table.add_column("Gap (ms)", justify="right")
    table.add_column("Races", justify="right")
    table.add_column("Recoveries", justify="right")
    table.add_column("Fast wins", justify="right")
    table.add_column("Probability", justify="right")
    for row in rows:
        table.add_row(escape(row.config), f"{row.interval_ms:g}", str(row.races),
                      str(row.recoveries), str(row.fast_wins),
                      _number(row.probability, "{:.3f}"))
    return table
