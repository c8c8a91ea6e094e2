from ffpaxos import render
from ffpaxos.bench import BenchResult, SweepRow
from ffpaxos.checker.monitors import monitor
from ffpaxos.quorum import QuorumSystem, derive_table, validate_fast_flexible
from ffpaxos.simnet.trace import Trace


def _plain(*renderables) -> str:
    console = render.make_console(width=120, record=True, color_system=None)
    with console.capture() as capture:
        for r in renderables:
            console.print(r)
    return capture.get()


def test_report_text_keeps_the_plain_rendering(ffp_973):
    for qs in (ffp_973, QuorumSystem.cardinality(5, 3, 3, 3)):
        report = validate_fast_flexible(qs)
        assert render.report_text(report).plain == report.render()


def test_verdicts_and_derivation_tables():
    out = _plain(render.verdict_table(monitor(Trace())), render.derive_table(11, derive_table(11)))
    assert out.count("pass") == 5
    assert "Smallest phase-2 quorums for n=11" in out


def test_bench_tables_show_missing_values_as_dashes():
    result = BenchResult("[ffp]", aggregates={"instances": 3, "median_ms": None})
    out = _plain(render.bench_table([result], ratios={"median_ms": None}),
                 render.sweep_table([SweepRow("ffp", 0.5, 0, 0, 0)]))
    assert "[ffp]" in out
    assert "median latency (ms)" in out
    assert "-" in out
