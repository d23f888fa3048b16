"""Explorer tests: BFS exploration, classification, coverage, diagnosis,
pointwise invariant analysis, and constraint-based checking."""

from __future__ import annotations

import pytest

from minibee.errors import StateSpaceTooLarge
from minibee.evaluator import enabled_bindings, resolve_constants
from minibee.explorer import (
    DEADLOCKED,
    ExploreLimits,
    INVARIANT_VIOLATED,
    LIVE,
    OPEN,
    check_invariant_pointwise,
    constraint_based_check,
    coverage_report,
    explore,
    find_deadlocks,
)
from minibee.parser import parse_system

from .oracle import deadlocked_states, reachable_states

NO_EVENT_SRC = (
    "SYSTEM Inert VARIABLES x INVARIANT x : NAT INITIALISATION x := 0 EVENTS END"
)


class TestExplore:
    def test_no_event_system_deadlocks_immediately(self, desk):
        g = explore(parse_system(NO_EVENT_SRC), desk)
        assert len(g.nodes) == 1
        assert g.count(DEADLOCKED) == 1

    def test_readwrite_matches_oracle(self, corpus, desk):
        system = corpus["readWrite"].system
        g = explore(system, desk)
        assert set(g.nodes) == reachable_states(system, desk)

    def test_buggy_deadlocks_are_lone_readers(self, corpus, desk):
        system = corpus["readWriteR-buggy"].system
        g = explore(system, desk)
        deadlocked = g.states_of(DEADLOCKED)
        assert len(deadlocked) >= 1
        for state in deadlocked:
            assert len(state.get("activeReaders")) == 1

    def test_classification_matches_oracle_deadlocks(self, corpus, desk):
        system = corpus["readWriteR-buggy"].system
        g = explore(system, desk)
        assert set(g.states_of(DEADLOCKED)) == deadlocked_states(system, desk)

    def test_live_nodes_replay(self, corpus, desk):
        system = corpus["readWrite"].system
        g = explore(system, desk)
        scope = g.scope
        outgoing = {}
        for t in g.transitions:
            outgoing.setdefault(t.src, []).append((t.event, t.binding, t.dst))
        for state in g.states_of(LIVE)[:40]:
            replayed = [
                (ev.name, b)
                for ev in system.events
                for b in enabled_bindings(ev, state, scope)
            ]
            assert [(e, b) for e, b, _ in outgoing[state]] == replayed

    def test_limits_leave_open_nodes(self, corpus, desk):
        system = corpus["readWrite"].system
        g = explore(system, desk, ExploreLimits(max_nodes=10))
        assert g.count(OPEN) > 0
        g2 = explore(system, desk, ExploreLimits(max_depth=2))
        assert g2.count(OPEN) > 0
        full = explore(system, desk)
        assert full.count(OPEN) == 0

    def test_determinism_bytewise(self, corpus, desk):
        system = corpus["readWriteR-buggy"].system
        assert explore(system, desk).dump() == explore(system, desk).dump()

    def test_wd_finding_is_not_a_crash(self):
        from minibee.values import Scope

        src = (
            "SYSTEM Wd VARIABLES n INVARIANT n : NAT & n <= 2 INITIALISATION n := 0 "
            "EVENTS dec = SELECT n <= 2 THEN n := n - 1 END END"
        )
        g = explore(parse_system(src), Scope())
        assert g.wd_findings
        assert g.wd_findings[0].event == "dec"


class TestCoverage:
    def test_no_event_block(self, desk):
        g = explore(parse_system(NO_EVENT_SRC), desk)
        rep = coverage_report(g)
        text = rep.render()
        assert "deadlocked          :1" in text
        assert "total               :1" in text
        assert rep.covered == [] and rep.uncovered == []

    def test_full_exploration_covers_everything(self, corpus, desk):
        g = explore(corpus["readWrite"].system, desk)
        rep = coverage_report(g)
        assert rep.uncovered == []
        assert all(k > 0 for k in rep.event_counts.values())

    def test_buggy_report_counts_deadlocks(self, corpus, desk):
        rep = coverage_report(explore(corpus["readWriteR-buggy"].system, desk))
        assert rep.class_counts[DEADLOCKED] >= 1
        assert "deadlocked" in rep.render()

    def test_counts_sum_to_total(self, corpus, desk):
        rep = coverage_report(explore(corpus["readWriteR-buggy"].system, desk))
        assert sum(rep.class_counts.values()) == rep.total
        assert set(rep.covered) | set(rep.uncovered) == set(rep.event_counts)
        assert not set(rep.covered) & set(rep.uncovered)


class TestFindDeadlocks:
    def test_buggy_diagnosis_names_wrong_guard(self, corpus, desk):
        g = explore(corpus["readWriteR-buggy"].system, desk)
        diagnoses = find_deadlocks(g)
        assert diagnoses
        for d in diagnoses:
            (reason,) = [r for r in d.reasons if r.event == "endReading"]
            assert reason.conjunct == "nbActiveReaders > 1"

    def test_fixed_has_no_deadlocks(self, corpus, desk):
        assert find_deadlocks(explore(corpus["readWriteR-fixed"].system, desk)) == []

    def test_no_event_system_diagnosis(self, desk):
        (diag,) = find_deadlocks(explore(parse_system(NO_EVENT_SRC), desk))
        assert diag.reasons == []


class TestPointwiseInvariant:
    def test_fixed_clean(self, corpus, desk):
        system = corpus["readWrite"].system
        g = explore(system, desk)
        assert check_invariant_pointwise(system, desk, g) == []

    def test_mutant_fails_exclusion_conjunct(self, corpus, desk):
        system = corpus["readWriteR-mutant"].system
        g = explore(system, desk)
        failures = check_invariant_pointwise(system, desk, g)
        assert failures
        assert {f.conjunct for f in failures} == {
            "not(card(activeWriter) = 1 & card(activeReaders) >= 1)"
        }

    def test_initial_only_graph_clean(self, corpus, desk):
        system = corpus["readWrite"].system
        g = explore(system, desk, ExploreLimits(max_nodes=1))
        assert len(g.nodes) == 1
        assert check_invariant_pointwise(system, desk, g) == []


BADWRITE_SRC_TEMPLATE = """
SYSTEM BadWriters
SETS WRITER
VARIABLES activeWriter
INVARIANT
    activeWriter <: WRITER
  & card(activeWriter) <= 1
INITIALISATION
    activeWriter := {}
EVENTS
  badWrite = SELECT true THEN activeWriter := WRITER END
END
"""


class TestConstraintBasedCheck:
    def test_fixed_reading_no_violation(self, corpus, desk):
        result = constraint_based_check(corpus["readWrite"].system, desk, "reading")
        assert not result.found
        assert result.states_examined == 512

    def test_full_carrier_assignment_violates(self):
        from minibee.values import Scope

        system = parse_system(BADWRITE_SRC_TEMPLATE)
        result = constraint_based_check(system, Scope({"WRITER": 2}), "badWrite")
        assert result.found
        pre, binding, post = result.violation
        assert result.failed_conjunct == "card(activeWriter) <= 1"
        assert len(post.get("activeWriter")) == 2

    def test_vacuous_event(self, corpus, desk):
        src = corpus["readWrite"].source.replace(
            "EVENTS",
            "EVENTS\n  never = SELECT false THEN skip END;",
            1,
        )
        system = parse_system(src)
        result = constraint_based_check(system, desk, "never")
        assert not result.found
        assert result.firings == 0

    def test_ceiling(self, corpus, desk):
        with pytest.raises(StateSpaceTooLarge):
            constraint_based_check(corpus["readWrite"].system, desk, "reading", ceiling=10)
