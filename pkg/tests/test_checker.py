import pytest

from ffpaxos.checker.exhaustive import PICK_SOUNDNESS, TinyModel, exhaustive_explore
from ffpaxos.checker.explore import (
    ADVERSARIAL_DROP, ADVERSARIAL_DUP, adversarial, adversarial_config, explore, run_seed,
)
from ffpaxos.checker.monitors import (
    ACCEPTOR_MONOTONICITY, AGREEMENT, O4_UNIQUENESS, PER_ROUND_AGREEMENT, VALIDITY,
    failures, monitor, replays,
)
from ffpaxos.checker.o4 import o4_trials
from ffpaxos.checker.scenarios import CATALOG, scripted_counterexample
from ffpaxos.config import load_config
from ffpaxos.core.rounds import RoundConfig
from ffpaxos.errors import BoundExceededError, InvalidSystemError, UsageError
from ffpaxos.quorum import QuorumSystem
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.model import DelayModel, LinkModel, SimConfig
from ffpaxos.simnet.trace import Trace
from ffpaxos.workload import WorkloadSpec


def _failed(trace):
    return sorted(v.invariant for v in failures(monitor(trace)))


class TestMonitors:
    def test_clean_trace_passes_everything(self):
        trace = Trace(0, "hand")
        trace.add(0.0, "p0", tr.CLIENT, {"instance": 0, "value": "X"})
        trace.add(1.0, "a0", tr.STATE, {"instance": 0, "rnd": 0, "vrnd": 0, "vval": "X"})
        trace.add(2.0, "l0", tr.DECIDE, {"instance": 0, "round": 0, "value": "X"})
        verdicts = monitor(trace)
        assert [v.verdict for v in verdicts] == ["pass"] * 5
        assert not any(replays(v) for v in verdicts)

    def test_unproposed_decision(self):
        trace = Trace(0, "hand")
        trace.add(0.0, "p0", tr.CLIENT, {"instance": 0, "value": "X"})
        trace.add(2.0, "l0", tr.DECIDE, {"instance": 0, "round": 0, "value": "Z"})
        (bad,) = failures(monitor(trace))
        assert bad.invariant == VALIDITY
        assert len(bad.counterexample) == 1
        assert replays(bad)

    def test_two_values_in_one_round(self):
        trace = Trace(0, "hand")
        for value in ("X", "Y"):
            trace.add(0.0, "p0", tr.CLIENT, {"instance": 3, "value": value})
        trace.add(1.0, "l0", tr.DECIDE, {"instance": 3, "round": 2, "value": "X"})
        trace.add(1.5, "p0", tr.DECIDE, {"instance": 3, "round": 2, "value": "X"})
        trace.add(2.0, "l0", tr.DECIDE, {"instance": 3, "round": 2, "value": "Y"})
        assert _failed(trace) == [AGREEMENT, PER_ROUND_AGREEMENT]
        for verdict in failures(monitor(trace)):
            assert len(verdict.counterexample.decisions()) == 2
            assert replays(verdict)

    def test_acceptor_going_backwards(self):
        trace = Trace(0, "hand")
        trace.add(1.0, "a2", tr.STATE, {"instance": 0, "rnd": 3, "vrnd": 2, "vval": "X"})
        trace.add(2.0, "a2", tr.STATE, {"instance": 1, "rnd": 0, "vrnd": -1, "vval": None})
        trace.add(3.0, "a2", tr.STATE, {"instance": 0, "rnd": 3, "vrnd": 1, "vval": "Y"})
        (bad,) = failures(monitor(trace))
        assert bad.invariant == ACCEPTOR_MONOTONICITY
        assert [r.time for r in bad.counterexample] == [1.0, 3.0]

    def test_vote_without_a_value_is_inconsistent(self):
        trace = Trace(0, "hand")
        trace.add(1.0, "a0", tr.STATE, {"instance": 0, "rnd": 1, "vrnd": 1, "vval": None})
        assert _failed(trace) == [ACCEPTOR_MONOTONICITY]

    def test_pick_with_two_candidates(self):
        trace = Trace(0, "hand")
        trace.add(1.0, "p1", tr.PICK, {"instance": 0, "round": 1, "o4": ["X", "Y"]})
        assert _failed(trace) == [O4_UNIQUENESS]

    def test_verdict_records(self):
        trace = Trace(0, "hand")
        trace.add(2.0, "l0", tr.DECIDE, {"instance": 0, "round": 0, "value": "Z"})
        record = failures(monitor(trace))[0].to_record()
        assert record["verdict"] == "fail"
        assert len(record["counterexample"]) == 1


class TestScenarios:
    def test_broken_fast_intersection_decides_two_values(self):
        trace = scripted_counterexample("broken-fast-intersection")
        assert {r["value"] for r in trace.decisions()} == {"X", "Y"}
        bad = failures(monitor(trace))
        assert {v.invariant for v in bad} >= {AGREEMENT, O4_UNIQUENESS}
        assert all(replays(v) for v in bad)
        (pick,) = trace.of_kind(tr.PICK)
        assert pick["o4"] == ["X", "Y"]
        assert pick["quorum"] == [0, 3, 4]

    def test_broken_classic_intersection_decides_two_values(self):
        trace = scripted_counterexample("broken-classic-intersection")
        decided = sorted((r["round"], r["value"]) for r in trace.decisions())
        assert decided == [(0, "X"), (1, "Y")]
        assert AGREEMENT in _failed(trace)

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_scenarios_are_reproducible(self, name):
        assert CATALOG[name]().dumps() == CATALOG[name]().dumps()

    def test_unknown_scenario(self):
        with pytest.raises(UsageError):
            scripted_counterexample("split-brain")

    def test_refuses_a_valid_system(self, ffp_973):
        with pytest.raises(UsageError):
            scripted_counterexample("broken-fast-intersection", ffp_973)

    def test_refuses_a_different_invalid_system(self):
        with pytest.raises(UsageError):
            scripted_counterexample("broken-fast-intersection", QuorumSystem.cardinality(4, 2, 2, 4))

    def test_accepts_its_own_system(self):
        trace = scripted_counterexample("broken-fast-intersection", QuorumSystem.cardinality(5, 3, 3, 3))
        assert len(trace.decisions()) == 2


class TestExplore:
    def test_adversarial_fills_unset_faults(self):
        link = adversarial(LinkModel())
        assert (link.drop, link.dup) == (ADVERSARIAL_DROP, ADVERSARIAL_DUP)
        assert link.delay.model == "exponential"
        assert link.delay.mean == 2.0
        kept = adversarial(LinkModel(DelayModel("uniform", hi=3.0), drop=0.3))
        assert kept.drop == 0.3 and kept.delay.model == "uniform"

    def test_link_overrides_are_perturbed_too(self, ffp_973):
        config = SimConfig(quorums=ffp_973, links=((("p0", "a3"), LinkModel(drop=0.2)),))
        hostile = adversarial_config(config)
        override = hostile.link_for("p0", "a3")
        assert (override.drop, override.dup) == (0.2, ADVERSARIAL_DUP)
        assert override.delay.model == "exponential"
        assert hostile.link_for("p0", "a1").drop == ADVERSARIAL_DROP

    def test_small_campaign_is_clean(self, ffp_973):
        config = SimConfig(quorums=ffp_973, seed=5)
        summary = explore(config, WorkloadSpec(rate=1000, duration=0.01, conflict_fraction=0.3), seeds=4)
        assert summary.seeds_run == 4
        assert summary.clean and summary.exit_code == 0
        assert summary.first_failing_seed is None
        assert summary.instances > 0

    def test_zero_seeds(self, ffp_973):
        summary = explore(SimConfig(quorums=ffp_973), WorkloadSpec(), seeds=0)
        assert summary.seeds_run == 0 and summary.clean

    def test_invalid_system_is_refused(self):
        config = SimConfig(quorums=QuorumSystem.cardinality(5, 3, 3, 3))
        with pytest.raises(InvalidSystemError):
            explore(config, WorkloadSpec(), seeds=1)

    def test_seed_result_is_reproducible(self, ffp_973):
        config = SimConfig(quorums=ffp_973, link=adversarial(LinkModel()))
        workload = WorkloadSpec(rate=1000, duration=0.01, conflict_fraction=0.5)
        assert run_seed(config, workload, 9, partitions=True) == run_seed(config, workload, 9, partitions=True)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["n11-ffp-973", "n11-fp-69"])
    def test_shipped_configs_survive_two_hundred_seeds(self, configs_dir, name):
        config = load_config(configs_dir / f"{name}.yaml")
        summary = explore(config.sim_config(), config.workload, seeds=200,
                          random_partitions=True)
        assert summary.seeds_run == 200
        assert summary.clean


def _tiny(n, q1, q2c, q2f, classify="even-fast"):
    return TinyModel(QuorumSystem.cardinality(n, q1, q2c, q2f),
                     RoundConfig(proposers=2, classify_rule=classify))


class TestExhaustive:
    def test_bounds(self):
        with pytest.raises(BoundExceededError):
            _tiny(4, 3, 2, 4)
        with pytest.raises(BoundExceededError):
            TinyModel(QuorumSystem.cardinality(3, 2, 2, 3), RoundConfig(proposers=3))
        with pytest.raises(BoundExceededError):
            TinyModel(QuorumSystem.cardinality(3, 2, 2, 3), RoundConfig(proposers=2), max_round=3)

    def test_disjoint_classic_quorums_are_caught(self):
        summary = exhaustive_explore(_tiny(3, 1, 1, 3, classify="all-classic"))
        assert not summary.clean and summary.exit_code == 1
        violation = next(v for v in summary.violations if v.invariant == AGREEMENT)
        assert {r["value"] for r in violation.counterexample.decisions()} == {"X", "Y"}
        assert len(violation.counterexample.of_kind(tr.STEP)) == len(violation.path)

    def test_valid_system_stays_clean(self):
        summary = exhaustive_explore(_tiny(3, 2, 2, 3), max_states=5000)
        assert summary.clean
        assert summary.states <= 5000
        assert summary.transitions >= summary.states - 1

    def test_depth_bound_marks_the_result_partial(self):
        summary = exhaustive_explore(_tiny(3, 2, 2, 3), depth=3)
        assert summary.truncated_depth and summary.partial
        assert summary.max_depth == 3
        assert summary.to_record()["complete"] is False

    @pytest.mark.slow
    def test_fast_quorums_of_two_out_of_three_are_caught(self, configs_dir):
        config = load_config(configs_dir / "n3-broken-fast.yaml")
        summary = exhaustive_explore(config.tiny_model())
        found = {v.invariant for v in summary.violations}
        assert AGREEMENT in found
        assert found <= {AGREEMENT, PER_ROUND_AGREEMENT, O4_UNIQUENESS, PICK_SOUNDNESS}

    @pytest.mark.slow
    def test_shipped_tiny_config_is_clean(self, configs_dir):
        config = load_config(configs_dir / "n3-tiny-exhaustive.yaml")
        summary = exhaustive_explore(config.tiny_model(), max_states=config.checker.max_states)
        assert summary.clean


class TestO4Trials:
    def test_small_campaign(self):
        summary = o4_trials(2000, seed=3)
        assert summary.trials == 2000
        assert summary.explicit > 0
        assert summary.clean
        assert summary.max_size <= 1

    def test_campaigns_are_seeded(self):
        assert o4_trials(300, seed=8).to_record() == o4_trials(300, seed=8).to_record()

    @pytest.mark.slow
    def test_hundred_thousand_trials(self):
        summary = o4_trials(100_000, seed=0)
        assert summary.clean
        assert summary.max_size == 1
