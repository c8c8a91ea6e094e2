import pytest
from hypothesis import given, settings, strategies as st

from ffpaxos.core import acceptor, coordinator, learner
from ffpaxos.core.acceptor import AcceptorState
from ffpaxos.core.coordinator import CoordinatorState, Phase
from ffpaxos.core.learner import LearnerState, fast_round_stuck
from ffpaxos.core.messages import (
    ANY, ANY_ON_CLASSIC, AGREEMENT_VIOLATION, DOUBLE_VOTE, Decided, P1a, P1b, P2a, P2b, Propose,
)
from ffpaxos.core.pick import PickKind, chosen, o4_values, pickable_values
from ffpaxos.core.rounds import NONE, RoundConfig, RoundKind
from ffpaxos.errors import ProtocolError, UsageError
from ffpaxos.quorum import QuorumSystem, minimal_phase2


def _p1b(sender, vrnd=NONE, vval=None, round=1, instance=0):
    return P1b(instance, round, vrnd, vval, sender)


@pytest.fixture
def five_four_four() -> QuorumSystem:
    """Five acceptors, phase-1 and fast quorums of four"""
    return QuorumSystem.cardinality(5, 4, 2, 4)


@pytest.fixture
def odd_fast() -> RoundConfig:
    return RoundConfig(proposers=1, classify_rule="odd-fast")


class TestRounds:
    def test_even_fast_modulo(self):
        rc = RoundConfig(proposers=2)
        assert [rc.classify(r) for r in range(3)] == [RoundKind.FAST, RoundKind.CLASSIC, RoundKind.FAST]
        assert [rc.owner(r) for r in range(4)] == [0, 1, 0, 1]

    def test_paired_ownership(self):
        rc = RoundConfig(proposers=2, owner_rule="paired")
        assert [rc.owner(r) for r in range(6)] == [0, 0, 1, 1, 0, 0]

    def test_recovery_prefers_classic_rounds(self):
        rc = RoundConfig(proposers=2)
        assert rc.recovery_round(1, 0) == 1
        # p0 owns only even (fast) rounds here
        assert rc.recovery_round(0, 0) == 2
        paired = RoundConfig(proposers=2, owner_rule="paired")
        assert paired.recovery_round(0, 0) == 1

    def test_all_fast_recovers_on_a_fast_round(self):
        rc = RoundConfig(proposers=1, classify_rule="all-fast")
        assert rc.recovery_round(0, 0) == 1

    def test_unknown_rules(self):
        with pytest.raises(UsageError):
            RoundConfig(classify_rule="sometimes")
        with pytest.raises(UsageError):
            RoundConfig(proposers=0)


class TestAcceptor:
    def test_promise_reports_last_vote(self):
        st = AcceptorState(me=2, rnd=1, vrnd=1, vval="X")
        step = acceptor.on_p1a(st, P1a(0, 3))
        assert step.messages == (P1b(0, 3, 1, "X", 2),)
        assert step.state.rnd == 3

    def test_stale_prepare_is_ignored(self):
        st = AcceptorState(me=0, rnd=4)
        assert acceptor.on_p1a(st, P1a(0, 4)) == acceptor.on_p1a(st, P1a(0, 2))
        assert acceptor.on_p1a(st, P1a(0, 2)).messages == ()

    def test_any_opens_fast_round_for_first_proposal(self, even_fast):
        st = acceptor.on_p2a(AcceptorState(me=1), P2a(0, 2, ANY), even_fast).state
        assert (st.rnd, st.open_any) == (2, 2)
        step = acceptor.on_propose(st, Propose(0, "X"))
        assert step.messages == (P2b(0, 2, "X", 1),)
        assert acceptor.on_propose(step.state, Propose(0, "Y")).messages == ()

    def test_any_on_classic_round_is_a_fault(self, even_fast):
        st = AcceptorState(me=0)
        step = acceptor.on_p2a(st, P2a(0, 1, ANY), even_fast)
        assert step.state == st
        assert [f.kind for f in step.faults] == [ANY_ON_CLASSIC]

    def test_prepare_closes_an_armed_round(self):
        st = acceptor.on_p1a(AcceptorState.armed(0, 0), P1a(0, 1)).state
        assert acceptor.on_propose(st, Propose(0, "X")).messages == ()

    def test_classic_vote_once_per_round(self, even_fast):
        step = acceptor.on_p2a(AcceptorState(me=0, rnd=1), P2a(0, 1, "X"), even_fast)
        assert step.messages == (P2b(0, 1, "X", 0),)
        again = acceptor.on_p2a(step.state, P2a(0, 1, "Y"), even_fast)
        assert again.messages == ()


class TestPick:
    def test_nothing_voted_is_free(self, ffp_973, even_fast):
        outcome = pickable_values(range(9), 1, [_p1b(a) for a in range(9)], ffp_973, even_fast)
        assert outcome.kind is PickKind.FREE

    def test_classic_vote_is_forced(self, ffp_973, even_fast):
        qs = QuorumSystem.cardinality(3, 2, 2, 3)
        M = [P1b(0, 3, 1, "Y", 0), P1b(0, 3, NONE, None, 1)]
        outcome = pickable_values({0, 1}, 3, M, qs, even_fast)
        assert (outcome.kind, outcome.value, outcome.k) == (PickKind.FORCED, "Y", 1)

    def test_fast_round_majority_inside_q_is_forced(self, ffp_973, even_fast):
        votes = {0: "X", 1: "X", 2: "X", 3: "X", 4: "X", 5: "Y", 6: "Y", 7: "Y"}
        M = [_p1b(a, 0, votes.get(a)) if a in votes else _p1b(a) for a in range(9)]
        outcome = pickable_values(range(9), 1, M, ffp_973, even_fast)
        assert outcome.is_forced and outcome.value == "X"
        assert outcome.o4 == ("X",)

    def test_split_fast_round_is_free(self, ffp_973, even_fast):
        votes = {0: "X", 1: "X", 2: "X", 3: "Y", 4: "Y", 5: "Y"}
        M = [_p1b(a, 0, votes[a]) if a in votes else _p1b(a) for a in range(9)]
        outcome = pickable_values(range(9), 1, M, ffp_973, even_fast)
        assert outcome.kind is PickKind.FREE and outcome.k == 0

    def test_three_of_four_inside_q_forces_the_value(self, five_four_four, odd_fast):
        votes = {0: "X", 1: "X", 2: "X", 3: "Y"}
        M = [_p1b(a, 1, v, round=2) for a, v in votes.items()]
        outcome = pickable_values({0, 1, 2, 3}, 2, M, five_four_four, odd_fast)
        assert (outcome.kind, outcome.value, outcome.k) == (PickKind.FORCED, "X", 1)
        assert outcome.o4 == ("X",)

    def test_two_lone_votes_leave_the_pick_free(self, five_four_four, odd_fast):
        M = [_p1b(0, 1, "X", round=2), _p1b(1, 1, "Y", round=2),
             _p1b(2, round=2), _p1b(3, round=2)]
        outcome = pickable_values({0, 1, 2, 3}, 2, M, five_four_four, odd_fast)
        assert (outcome.kind, outcome.k, outcome.o4) == (PickKind.FREE, 1, ())

    def test_invalid_system_can_leave_two_candidates(self, even_fast):
        qs = QuorumSystem.cardinality(5, 3, 3, 3)
        M = [_p1b(0, 0, "Y"), _p1b(3, 0, "X"), _p1b(4, 0, "X")]
        assert o4_values({0, 3, 4}, 0, M, qs) == ["X", "Y"]
        assert pickable_values({0, 3, 4}, 1, M, qs, even_fast).value == "X"

    def test_preconditions(self, ffp_973, even_fast):
        with pytest.raises(ProtocolError):
            pickable_values(range(8), 1, [_p1b(a) for a in range(8)], ffp_973, even_fast)
        with pytest.raises(ProtocolError):
            pickable_values(range(9), 1, [_p1b(a) for a in range(8)], ffp_973, even_fast)
        with pytest.raises(ProtocolError):
            pickable_values(range(9), 1, [_p1b(a, 1, "X") for a in range(9)], ffp_973, even_fast)
        with pytest.raises(ProtocolError):
            pickable_values(range(9), NONE, [], ffp_973, even_fast)

    @given(st.data())
    @settings(max_examples=300, deadline=None)
    def test_valid_systems_never_have_two_candidates(self, data):
        n = data.draw(st.integers(min_value=1, max_value=7))
        q1 = data.draw(st.integers(min_value=1, max_value=n))
        floor = minimal_phase2(n, q1)
        qs = QuorumSystem.cardinality(n, q1, floor.q2c,
                                      data.draw(st.integers(min_value=floor.q2f, max_value=n)))
        Q = data.draw(st.sets(st.integers(min_value=0, max_value=n - 1), min_size=q1))
        M = []
        for a in sorted(Q):
            vote = data.draw(st.sampled_from([None, "X", "Y", "Z"]))
            M.append(_p1b(a, 0, vote) if vote else _p1b(a))
        assert len(o4_values(Q, 0, M, qs)) <= 1

    def test_chosen_uses_the_family_of_the_round(self, ffp_973, even_fast):
        votes = [(0, a, "X") for a in range(6)] + [(1, a, "Y") for a in range(3)]
        assert chosen(votes, ffp_973, even_fast) == frozenset({(1, "Y")})
        votes.append((0, 6, "X"))
        assert chosen(votes, ffp_973, even_fast) == frozenset({(0, "X"), (1, "Y")})


class TestCoordinator:
    qs = QuorumSystem.cardinality(3, 2, 2, 3)

    def test_only_the_owner_starts_a_round(self):
        with pytest.raises(ProtocolError):
            coordinator.start_round(CoordinatorState(me=0), 1, RoundConfig(proposers=2))

    def test_classic_free_proposes_own_value(self):
        rc = RoundConfig(classify_rule="all-classic")
        step = coordinator.start_round(CoordinatorState(me=0, value="X"), 0, rc)
        assert step.messages == (P1a(0, 0),)
        st = step.state
        st = coordinator.on_p1b(st, P1b(0, 0, NONE, None, 0), self.qs, rc).state
        step = coordinator.on_p1b(st, P1b(0, 0, NONE, None, 1), self.qs, rc)
        assert step.messages == (P2a(0, 0, "X"),)
        assert step.state.phase is Phase.ACCEPTING

    def test_classic_free_without_value_waits_for_a_client(self):
        rc = RoundConfig(classify_rule="all-classic")
        st = coordinator.start_round(CoordinatorState(me=0), 0, rc).state
        for a in (0, 1):
            st = coordinator.on_p1b(st, P1b(0, 0, NONE, None, a), self.qs, rc).state
        assert st.phase is Phase.AWAITING_VALUE
        assert coordinator.on_value(st, "Z").messages == (P2a(0, 0, "Z"),)

    def test_classic_free_adopts_a_reported_value(self, even_fast):
        st = coordinator.start_round(CoordinatorState(me=0), 1, even_fast).state
        st = coordinator.on_p1b(st, P1b(0, 1, 0, "Y", 0), self.qs, even_fast).state
        step = coordinator.on_p1b(st, P1b(0, 1, 0, "X", 1), self.qs, even_fast)
        assert step.messages == (P2a(0, 1, "X"),)

    def test_fast_free_sends_any(self, even_fast):
        st = coordinator.start_round(CoordinatorState(me=0, value="X"), 2, even_fast).state
        for a in (0, 1):
            step = coordinator.on_p1b(st, P1b(0, 2, NONE, None, a), self.qs, even_fast)
            st = step.state
        assert step.messages == (P2a(0, 2, ANY),)

    def test_duplicate_promise_does_not_count_twice(self, even_fast):
        st = coordinator.start_round(CoordinatorState(me=0), 1, even_fast).state
        st = coordinator.on_p1b(st, P1b(0, 1, NONE, None, 0), self.qs, even_fast).state
        step = coordinator.on_p1b(st, P1b(0, 1, NONE, None, 0), self.qs, even_fast)
        assert step.messages == () and step.state.phase is Phase.PREPARING

    def test_recovery_moves_to_next_classic_round(self, even_fast):
        armed = CoordinatorState.armed(0, 0, 0)
        step = coordinator.recover_conflict(armed, 0, even_fast)
        assert step.messages == (P1a(0, 1),)


class TestLearner:
    def test_decides_on_fast_quorum(self, ffp_973, even_fast):
        ls = LearnerState(0)
        for a in range(6):
            step = learner.on_p2b(ls, P2b(0, 0, "X", a), ffp_973, even_fast)
            ls = step.state
            assert step.messages == ()
        step = learner.on_p2b(ls, P2b(0, 0, "X", 6), ffp_973, even_fast)
        assert step.messages == (Decided(0, 0, "X"),)
        assert step.state.decided == (0, "X")
        again = learner.on_p2b(step.state, P2b(0, 0, "X", 6), ffp_973, even_fast)
        assert again.messages == (Decided(0, 0, "X"),)

    def test_double_vote_is_reported(self, ffp_973, even_fast):
        ls = learner.on_p2b(LearnerState(0), P2b(0, 0, "X", 0), ffp_973, even_fast).state
        step = learner.on_p2b(ls, P2b(0, 0, "Y", 0), ffp_973, even_fast)
        assert [f.kind for f in step.faults] == [DOUBLE_VOTE]

    def test_two_decisions_are_reported(self, even_fast):
        qs = QuorumSystem.cardinality(4, 2, 2, 4)
        ls = LearnerState(0)
        faults = []
        for vote in (P2b(0, 1, "X", 0), P2b(0, 1, "X", 1), P2b(0, 3, "Y", 2), P2b(0, 3, "Y", 3)):
            step = learner.on_p2b(ls, vote, qs, even_fast)
            ls = step.state
            faults.extend(step.faults)
        assert ls.decisions == {(1, "X"), (3, "Y")}
        assert [f.kind for f in faults] == [AGREEMENT_VIOLATION]

    def test_stuck_depends_on_fast_quorum_size(self, ffp_973, fp_69, even_fast):
        ls = LearnerState(0, votes=frozenset({(0, a, "X") for a in range(3)} |
                                             {(0, a, "Y") for a in range(3, 6)}))
        assert not fast_round_stuck(ls, 0, ffp_973, even_fast)
        assert fast_round_stuck(ls, 0, fp_69.as_fast_flexible(), even_fast)
        assert not fast_round_stuck(ls, 1, fp_69.as_fast_flexible(), even_fast)

    def test_four_of_five_decides(self, five_four_four, odd_fast):
        ls = LearnerState(0)
        for a in range(4):
            step = learner.on_p2b(ls, P2b(0, 1, "X", a), five_four_four, odd_fast)
            ls = step.state
        assert step.messages == (Decided(0, 1, "X"),)

    def test_three_two_split_never_decides_and_is_stuck(self, five_four_four, odd_fast):
        ls = LearnerState(0)
        for a, value in enumerate("XXXYY"):
            step = learner.on_p2b(ls, P2b(0, 1, value, a), five_four_four, odd_fast)
            ls = step.state
            assert step.messages == () and step.faults == ()
        assert not ls.decisions
        assert fast_round_stuck(ls, 1, five_four_four, odd_fast)

    def test_even_split_at_seven_is_stuck(self, ffp_973):
        ls = LearnerState(0, votes=frozenset({(0, a, "X") for a in range(5)} |
                                             {(0, a, "Y") for a in range(5, 10)}))
        assert fast_round_stuck(ls, 0, ffp_973)
