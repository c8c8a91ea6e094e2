"""
Command-line entry point.

    ffpaxos quorum check|compare CONFIG
    ffpaxos quorum derive N
    ffpaxos simulate CONFIG [--seed S] [--trace OUT] [--scenario NAME]
    ffpaxos explore CONFIG [--seeds N] [--jobs J]
    ffpaxos exhaustive CONFIG [--depth D] [--max-states S]
    ffpaxos bench CONFIG --out CSV [--compare BASELINE] [--sweep MS ...]

Exit codes: 0 clean, 1 validation or property failure, 2 usage or config error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ffpaxos import __version__
from ffpaxos.bench import compare, conflict_sweep, run_bench, write_aggregates, write_instances, write_sweep
from ffpaxos.checker.exhaustive import exhaustive_explore
from ffpaxos.checker.explore import explore
from ffpaxos.checker.monitors import failures, monitor
from ffpaxos.checker.o4 import o4_trials
from ffpaxos.checker.scenarios import CATALOG, scripted_counterexample
from ffpaxos.config import Config, load_config
from ffpaxos.errors import BoundExceededError, ConfigError, InvalidSystemError, QuorumError, UsageError
from ffpaxos.log import log_message, setup_logging
from ffpaxos.quorum import derive_table, fast_paxos_suggestions, validate_fast_paxos
from ffpaxos import render
from ffpaxos.simnet.engine import run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="ffpaxos",
        description="Fast Flexible Paxos - quorum validation, simulation, safety checking and benchmarks",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="More logging on stderr (repeat for debug)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    quorum = sub.add_parser("quorum", help="Validate quorum systems")
    qsub = quorum.add_subparsers(dest="action", required=True)
    for action, text in (("check", "Validate the config's system under its own scheme"),
                         ("compare", "Fast Paxos vs Fast Flexible verdicts for the same cluster")):
        p = qsub.add_parser(action, help=text)
        p.add_argument("config", help="YAML config file")
        p.add_argument("--json", action="store_true", help="Print the machine-readable report")
    p = qsub.add_parser("derive", help="Smallest valid phase-2 quorums for every q1")
    p.add_argument("n", type=int, help="Number of acceptors")

    p = sub.add_parser("simulate", help="One deterministic simulation run")
    p.add_argument("config", help="YAML config file")
    p.add_argument("-s", "--seed", type=int, help="Override the config seed")
    p.add_argument("-t", "--trace", help="Write the trace to this file")
    p.add_argument("--scenario", choices=sorted(CATALOG),
                   help="Replay a scripted counterexample (needs allow_invalid)")

    p = sub.add_parser("explore", help="Randomized safety exploration over many seeds")
    p.add_argument("config", help="YAML config file")
    p.add_argument("-n", "--seeds", type=int, help="Number of seeds (config checker.seeds)")
    p.add_argument("-s", "--seed", type=int, help="First seed (config seed)")
    p.add_argument("-j", "--jobs", type=int, default=1, help="Worker processes")
    p.add_argument("--random-partitions", action="store_true", default=None,
                   help="Draw one partition per seed")
    p.add_argument("--no-faults", action="store_true",
                   help="Keep the config's link model instead of the adversarial defaults")
    p.add_argument("--o4-trials", type=int, default=0,
                   help="Also run this many randomized O4-uniqueness trials")
    p.add_argument("--json", action="store_true", help="Print the machine-readable summary")

    p = sub.add_parser("exhaustive", help="Bounded exhaustive search of a tiny model")
    p.add_argument("config", help="YAML config file")
    p.add_argument("-d", "--depth", type=int, help="Depth bound (config checker.depth)")
    p.add_argument("--max-states", type=int, help="State bound (config checker.max_states)")
    p.add_argument("--all", action="store_true", help="Keep going after the first violation")
    p.add_argument("--json", action="store_true", help="Print the machine-readable summary")

    p = sub.add_parser("bench", help="Latency and conflict benchmark, CSV output")
    p.add_argument("config", help="YAML config file")
    p.add_argument("-o", "--out", required=True, help="Per-instance CSV path")
    p.add_argument("-c", "--compare", help="Baseline config run on the same workload")
    p.add_argument("-s", "--seed", type=int, help="First seed (config seed)")
    p.add_argument("-n", "--seeds", type=int, default=1, help="Number of seeds")
    p.add_argument("--sweep", type=float, nargs="+", metavar="MS",
                   help="Race gaps (ms) for a conflict-probability sweep")
    p.add_argument("-j", "--jobs", type=int, default=1, help="Worker processes")
    return parser.parse_args(argv)


def _emit_json(record) -> None:
    sys.stdout.write(json.dumps(record, indent=2, sort_keys=True) + "\n")


# ============================================================================
# Commands
# ============================================================================

def cmd_quorum(args, console) -> int:
    if args.action == "derive":
        if args.n < 1:
            raise UsageError(f"n must be positive, got {args.n}")
        console.print(render.derive_table(args.n, derive_table(args.n)))
        console.print(render.compare_table(
            [validate_fast_paxos(s) for s in fast_paxos_suggestions(args.n)],
            title="Fast Paxos recommendations"))
        return EXIT_OK

    config = load_config(args.config)
    own = config.report()
    if args.action == "check":
        reports = [own]
    else:
        reports = config.compare_reports()
    if args.json:
        _emit_json([r.to_record() for r in reports])
    else:
        for report in reports:
            console.print(render.report_text(report))
        if args.action == "compare":
            console.print(render.compare_table(reports, title=config.name))
    return EXIT_OK if own.valid else EXIT_FAIL


def cmd_simulate(args, console) -> int:
    config = load_config(args.config)
    if args.scenario:
        if not config.allow_invalid:
            raise UsageError("--scenario replays a broken system and needs allow_invalid: true")
        trace = scripted_counterexample(args.scenario, config.engine_system)
    else:
        trace = run(config.sim_config(args.seed), config.workload)
    if args.trace:
        trace.dump(args.trace)
        logger.info("trace written to %s", args.trace)

    verdicts = monitor(trace)
    decided = {r["instance"] for r in trace.decisions()}
    console.print(f"{config.name}: seed {trace.seed}, {len(trace)} records, "
                  f"{len(decided)} instance(s) decided")
    console.print(render.verdict_table(verdicts))
    return EXIT_FAIL if failures(verdicts) else EXIT_OK


def cmd_explore(args, console) -> int:
    config = load_config(args.config)
    seeds = config.checker.seeds if args.seeds is None else args.seeds
    partitions = config.checker.random_partitions if args.random_partitions is None else True
    summary = explore(config.sim_config(), config.workload, seeds, jobs=max(1, args.jobs),
                      first_seed=args.seed, random_partitions=partitions,
                      faults=not args.no_faults)
    o4 = o4_trials(args.o4_trials, seed=config.seed) if args.o4_trials > 0 else None

    if args.json:
        record = summary.to_record()
        if o4 is not None:
            record["o4"] = o4.to_record()
        _emit_json(record)
    else:
        for item in render.explore_table(summary):
            console.print(item)
        if o4 is not None:
            console.print(render.o4_text(o4))
        if summary.first_failing_seed is not None:
            console.print(f"first failing seed: {summary.first_failing_seed}")
    if o4 is not None and not o4.clean:
        return EXIT_FAIL
    return summary.exit_code


def cmd_exhaustive(args, console) -> int:
    config = load_config(args.config)
    model = config.tiny_model()
    depth = config.checker.depth if args.depth is None else args.depth
    max_states = config.checker.max_states if args.max_states is None else args.max_states
    summary = exhaustive_explore(model, depth=depth, max_states=max_states,
                                 stop_at_first=not args.all)
    if args.json:
        _emit_json(summary.to_record())
    else:
        for item in render.exhaustive_table(summary):
            console.print(item)
    if summary.partial:
        log_message(f"search stopped at a bound after {summary.states} states", "warning")
    return summary.exit_code


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(f"{out.stem}-{suffix}.csv")


def cmd_bench(args, console) -> int:
    config = load_config(args.config)
    first = config.seed if args.seed is None else args.seed
    seeds = list(range(first, first + max(args.seeds, 1)))
    sim = config.sim_config(first)
    jobs = max(1, args.jobs)
    out = Path(args.out)

    systems = {config.name: config.system}
    if args.compare:
        baseline: Config = load_config(args.compare)
        if baseline.n != config.n:
            raise UsageError(f"cannot compare n={config.n} with baseline n={baseline.n}")
        systems[baseline.name] = baseline.system
        comparison = compare(config.system, baseline.system, config.workload, sim, seeds, jobs,
                             names=(config.name, baseline.name))
        results = [comparison.primary, comparison.baseline]
        console.print(render.comparison_table(comparison))
    else:
        results = [run_bench(config.system, config.workload, sim, seeds, jobs, config.name)]
        console.print(render.bench_table(results))

    write_instances(out, results)
    write_aggregates(_sibling(out, "aggregate"), results)
    written = [out, _sibling(out, "aggregate")]
    if args.sweep:
        rows = conflict_sweep(systems, args.sweep, config.workload, sim, seeds, jobs)
        write_sweep(_sibling(out, "sweep"), rows)
        written.append(_sibling(out, "sweep"))
        console.print(render.sweep_table(rows))
    logger.info("wrote %s", ", ".join(map(str, written)))
    return EXIT_OK


COMMANDS = {
    "quorum": cmd_quorum,
    "simulate": cmd_simulate,
    "explore": cmd_explore,
    "exhaustive": cmd_exhaustive,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    setup_logging(args.verbose)
    console = render.make_console()
    try:
        return COMMANDS[args.command](args, console)
    except InvalidSystemError as exc:
        log_message("refusing to run an invalid quorum system", "error")
        console.print(render.report_text(exc.report))
        return EXIT_FAIL
    except (ConfigError, QuorumError, UsageError, BoundExceededError) as exc:
        log_message(str(exc), "error")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
