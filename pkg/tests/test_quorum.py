import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffpaxos.errors import BoundExceededError, QuorumError, UsageError
from ffpaxos.quorum import (
    CLASSIC_FAST_FAST, CLASSIC_PAIRS, FAST_TRIPLES, PAXOS_PAIRS, PHASE1_CLASSIC, PHASE1_FAST_PAIR,
    Family, LegacyQuorumSystem, QuorumSystem, as_family, brute_force_check, derive_table,
    fast_paxos_suggestions, minimal_phase2, validate_fast_flexible, validate_fast_paxos,
    validate_flexible, validate_paxos, witness_holds,
)


def _ids(report):
    return [v.requirement for v in report.violations]


@st.composite
def cardinality_systems(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    q1, q2c, q2f = (draw(st.integers(min_value=1, max_value=n)) for _ in range(3))
    return QuorumSystem.cardinality(n, q1, q2c, q2f)


def _explicit_copy(qs: QuorumSystem) -> QuorumSystem:
    families = [list(itertools.combinations(range(qs.n), qs.size(f))) for f in Family]
    return QuorumSystem.explicit(qs.n, *families)


class TestPublishedConfigurations:
    def test_nine_three_seven_is_valid(self, ffp_973):
        report = validate_fast_flexible(ffp_973)
        assert report.valid
        assert report.render() == "fast-flexible: VALID"
        assert report.fault_tolerance == {"P1": 2, "P2C": 8, "P2F": 4}

    def test_fast_paxos_six_nine_is_valid_both_ways(self, fp_69):
        assert validate_fast_paxos(fp_69).valid
        lifted = fp_69.as_fast_flexible()
        assert (lifted.q1, lifted.q2c, lifted.q2f) == (6, 6, 9)
        assert validate_fast_flexible(lifted).valid

    def test_fast_quorum_of_seven_breaks_fast_paxos(self):
        report = validate_fast_paxos(LegacyQuorumSystem.cardinality(11, 6, 7))
        assert not report.valid
        assert CLASSIC_FAST_FAST in _ids(report)
        assert report.render().splitlines()[0].startswith("fast-paxos: INVALID (")

    def test_verdict_line_names_the_broken_inequalities(self):
        report = validate_fast_paxos(LegacyQuorumSystem.cardinality(11, 6, 7))
        assert report.render().splitlines()[0] == (
            "fast-paxos: INVALID (classic-fast-fast: qc+2qf > 2n, fast-triples: 3qf > 2n)")
        assert "6+2*7=20 <= 22" in report.render()

    def test_fast_flexible_reading_of_973_fails_fast_paxos(self, ffp_973):
        legacy = ffp_973.as_legacy()
        assert (legacy.qc, legacy.qf) == (3, 7)
        assert CLASSIC_PAIRS in _ids(validate_fast_paxos(legacy))


class TestValidators:
    def test_paxos_majorities(self):
        assert validate_paxos(5, 3).valid
        report = validate_paxos(4, 2)
        assert _ids(report) == [PAXOS_PAIRS]
        assert witness_holds(report.violations[0])

    def test_paxos_explicit(self):
        assert validate_paxos(3, [[0, 1], [1, 2], [0, 2]]).valid
        assert not validate_paxos(4, [[0, 1], [2, 3]]).valid

    def test_flexible(self):
        assert validate_flexible(11, 9, 3).valid
        assert not validate_flexible(10, 5, 5).valid
        assert validate_flexible(4, [[0, 1, 2, 3]], [[0], [3]]).valid
        assert not validate_flexible(4, [[0, 1]], [[2, 3]]).valid

    def test_fast_paxos_explicit_matches_cardinality(self):
        qc = [list(c) for c in itertools.combinations(range(5), 3)]
        qf = [list(c) for c in itertools.combinations(range(5), 4)]
        assert validate_fast_paxos(LegacyQuorumSystem.explicit(5, qc, qf)).valid
        assert validate_fast_paxos(LegacyQuorumSystem.cardinality(5, 3, 4)).valid

    def test_three_of_five_everywhere_fails_the_fast_pair_requirement(self):
        report = validate_fast_flexible(QuorumSystem.cardinality(5, 3, 3, 3))
        assert _ids(report) == [PHASE1_FAST_PAIR]
        witness = report.violations[0].witness
        assert [len(q) for q in witness] == [3, 3, 3]
        assert witness_holds(report.violations[0])

    def test_disjoint_classic_quorums(self):
        report = validate_fast_flexible(QuorumSystem.cardinality(4, 2, 2, 4))
        assert _ids(report) == [PHASE1_CLASSIC]
        assert witness_holds(report.violations[0])

    @given(cardinality_systems())
    @settings(max_examples=200, deadline=None)
    def test_every_witness_is_a_real_counterexample(self, qs):
        report = validate_fast_flexible(qs)
        for violation in report.violations:
            assert witness_holds(violation)
            sizes = [len(q) for q in violation.witness]
            if violation.requirement == PHASE1_CLASSIC:
                assert sizes == [qs.q1, qs.q2c]
            else:
                assert sizes == [qs.q1, qs.q2f, qs.q2f]

    @given(st.integers(min_value=1, max_value=12).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(1, n), st.integers(1, n))))
    @settings(max_examples=300, deadline=None)
    def test_fast_paxos_systems_stay_valid_when_relaxed(self, sizes):
        n, qc, qf = sizes
        lqs = LegacyQuorumSystem.cardinality(n, qc, qf)
        if validate_fast_paxos(lqs).valid:
            assert validate_fast_flexible(QuorumSystem.cardinality(n, qc, qc, qf)).valid
            assert validate_fast_flexible(lqs.as_fast_flexible()).valid

    @given(cardinality_systems(max_n=5))
    @settings(max_examples=100, deadline=None)
    def test_explicit_form_agrees_with_cardinality_form(self, qs):
        card = validate_fast_flexible(qs)
        expl = validate_fast_flexible(_explicit_copy(qs))
        assert card.verdict == expl.verdict
        assert _ids(card) == _ids(expl)
        assert card.fault_tolerance == expl.fault_tolerance


def _agrees_with_oracle(max_n):
    for n in range(1, max_n + 1):
        for q1, q2c, q2f in itertools.product(range(1, n + 1), repeat=3):
            qs = QuorumSystem.cardinality(n, q1, q2c, q2f)
            fast, oracle = validate_fast_flexible(qs), brute_force_check(qs)
            assert fast.valid == oracle.valid, qs.describe()
            assert _ids(fast) == _ids(oracle), qs.describe()


class TestOracle:
    def test_closed_form_matches_enumeration_small(self):
        _agrees_with_oracle(6)

    @pytest.mark.slow
    def test_closed_form_matches_enumeration_up_to_eight(self):
        _agrees_with_oracle(8)

    def test_bound(self):
        with pytest.raises(BoundExceededError):
            brute_force_check(QuorumSystem.cardinality(13, 7, 7, 10))
        assert brute_force_check(QuorumSystem.cardinality(13, 7, 7, 10), bound=13).valid

    def test_published_system_agrees(self, ffp_973):
        assert brute_force_check(ffp_973).valid

    def test_phase1_quorums_sharing_a_node(self):
        qs = QuorumSystem.explicit(3, [[0, 1], [1, 2]], [[1]], [[0, 1, 2]])
        assert brute_force_check(qs).valid
        assert validate_fast_flexible(qs).valid

    def test_disjoint_singletons(self):
        qs = QuorumSystem.explicit(2, [[0]], [[1]], [[0]])
        report = brute_force_check(qs)
        assert _ids(report) == [PHASE1_CLASSIC]
        assert report.violations[0].witness == ((0,), (1,))
        assert report.render().splitlines()[0] == "fast-flexible: INVALID (phase1-classic)"


class TestConstruction:
    @pytest.mark.parametrize("sizes", [(0, 1, 1), (4, 1, 1), (1, 1, 5)])
    def test_sizes_out_of_range(self, sizes):
        with pytest.raises(QuorumError):
            QuorumSystem.cardinality(4, *sizes)

    def test_explicit_rejects_unknown_nodes_and_empty_families(self):
        with pytest.raises(QuorumError):
            QuorumSystem.explicit(3, [[0, 3]], [[0]], [[0]])
        with pytest.raises(QuorumError):
            QuorumSystem.explicit(3, [], [[0]], [[0]])
        with pytest.raises(QuorumError):
            QuorumSystem.explicit(3, [[]], [[0]], [[0]])

    def test_explicit_families_are_superset_closed(self):
        qs = QuorumSystem.explicit(4, [[0, 1]], [[2]], [[1, 2, 3]])
        assert qs.is_quorum(Family.P1, {0, 1, 3})
        assert not qs.is_quorum(Family.P1, {0, 2})
        assert qs.is_quorum("p2c", {2, 3})

    @given(cardinality_systems(), st.data())
    @settings(max_examples=200, deadline=None)
    def test_supersets_of_quorums_are_quorums(self, qs, data):
        nodes = st.sets(st.integers(min_value=0, max_value=qs.n - 1))
        s = data.draw(nodes)
        bigger = s | data.draw(nodes)
        for system in (qs, _explicit_copy(qs)) if qs.n <= 5 else (qs,):
            for family in Family:
                if system.is_quorum(family, s):
                    assert system.is_quorum(family, bigger)

    def test_unknown_nodes_are_refused(self, ffp_973, fp_69):
        with pytest.raises(UsageError):
            ffp_973.is_quorum(Family.P1, range(5, 14))
        with pytest.raises(UsageError):
            QuorumSystem.explicit(3, [[0]], [[0]], [[0]]).is_quorum(Family.P1, {0, -1})
        with pytest.raises(UsageError):
            fp_69.is_quorum("fast", range(2, 12))
        assert not ffp_973.is_quorum(Family.P2F, set())

    def test_family_names(self):
        assert as_family("p2f") is Family.P2F
        with pytest.raises(UsageError):
            as_family("P3")

    def test_minimal_quorums_of_cardinality_system(self):
        qs = QuorumSystem.cardinality(4, 3, 2, 4)
        assert len(qs.minimal_quorums(Family.P1)) == 4
        assert qs.minimal_quorums(Family.P2F) == [frozenset(range(4))]


class TestDerivation:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_minimal_phase2_is_valid_and_tight(self, n):
        for q1 in range(1, n + 1):
            qs = minimal_phase2(n, q1)
            assert validate_fast_flexible(qs).valid
            if qs.q2c > 1:
                tighter = QuorumSystem.cardinality(n, q1, qs.q2c - 1, qs.q2f)
                assert _ids(validate_fast_flexible(tighter)) == [PHASE1_CLASSIC]
            if qs.q2f > 1:
                tighter = QuorumSystem.cardinality(n, q1, qs.q2c, qs.q2f - 1)
                assert _ids(validate_fast_flexible(tighter)) == [PHASE1_FAST_PAIR]

    def test_all_acceptor_phase1_allows_majority_fast_quorums(self):
        row = derive_table(11)[-1]
        assert (row.q1, row.q2c, row.q2f) == (11, 1, 6)

    def test_nine_of_eleven_allows_fast_seven(self):
        qs = minimal_phase2(11, 9)
        assert (qs.q2c, qs.q2f) == (3, 7)

    @pytest.mark.parametrize("n", range(1, 31))
    def test_fast_paxos_suggestions_are_valid(self, n):
        for lqs in fast_paxos_suggestions(n):
            assert validate_fast_paxos(lqs).valid
