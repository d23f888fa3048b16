"""Animator tests: seeded random runs, sessions, fire/undo, reduced view."""

from __future__ import annotations

import pytest

from minibee.animator import (
    DEADLOCK,
    STEP_BUDGET,
    fire,
    new_session,
    random_animate,
    reduced_view,
    step_options,
    undo,
)
from minibee.errors import EmptyHistory, IllegalChoice
from minibee.evaluator import apply_event, initial_state, resolve_constants
from minibee.explorer import DEADLOCKED, explore
from minibee.parser import parse_system
from minibee.values import Elem, FinSet

# Seed found by search: covers all ten events of readWriteR-fixed within
# 40 steps at the desk scope.
FULL_COVERAGE_SEED = 0


class TestRandomAnimate:
    def test_zero_steps(self, corpus, desk):
        log = random_animate(corpus["readWrite"].system, desk, 0, 1)
        assert log.steps == []
        assert len(log.visited) == 1
        assert log.terminated_reason == STEP_BUDGET

    def test_determinism(self, corpus, desk):
        a = random_animate(corpus["readWriteR-fixed"].system, desk, 40, 7)
        b = random_animate(corpus["readWriteR-fixed"].system, desk, 40, 7)
        assert a.steps == b.steps and a.visited == b.visited

    def test_full_coverage_run(self, corpus, desk):
        system = corpus["readWriteR-fixed"].system
        log = random_animate(system, desk, 40, FULL_COVERAGE_SEED)
        counts = log.event_counts(system)
        assert all(k > 0 for k in counts.values())

    def test_replay_soundness(self, corpus, desk):
        system = corpus["readWriteR-fixed"].system
        scope = resolve_constants(system, desk)
        log = random_animate(system, desk, 25, 3)
        state = initial_state(system, scope)
        for event, binding, post in log.steps:
            state = apply_event(system.event(event), binding, state, scope)
            assert state == post

    def test_deadlock_terminates_early(self, desk):
        system = parse_system(
            "SYSTEM OneShot VARIABLES x INVARIANT x : NAT & x <= 1 "
            "INITIALISATION x := 0 "
            "EVENTS go = SELECT x = 0 THEN x := 1 END END"
        )
        log = random_animate(system, desk, 10, 0)
        assert log.terminated_reason == DEADLOCK
        assert len(log.steps) == 1


class TestSession:
    def test_fresh_options_include_newreader(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        options = step_options(sess)
        assert ("newReader", (("rr", Elem("READER", 1)),)) in options

    def test_fire_want2read_moves_reader(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        fire(sess, ("newReader", (("rr", Elem("READER", 1)),)))
        fire(sess, ("want2read", (("rr", Elem("READER", 1)),)))
        assert sess.current.get("waitingReaders") == FinSet("READER", [1])
        assert len(sess.current.get("readers")) == 0

    def test_fire_then_undo_restores(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        before = sess.current
        fire(sess, step_options(sess)[0])
        undo(sess)
        assert sess.current == before

    def test_two_fires_one_undo(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        fire(sess, step_options(sess)[0])
        mid = sess.current
        fire(sess, step_options(sess)[0])
        undo(sess)
        assert sess.current == mid

    def test_stale_choice_raises(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        fire(sess, ("newReader", (("rr", Elem("READER", 1)),)))
        stale = ("want2read", (("rr", Elem("READER", 1)),))
        assert stale in step_options(sess)
        fire(sess, stale)
        # READER1 left the idle pool, so replaying the same choice is stale.
        with pytest.raises(IllegalChoice):
            fire(sess, stale)

    def test_undo_on_fresh_session(self, corpus, desk):
        with pytest.raises(EmptyHistory):
            undo(new_session(corpus["readWrite"].system, desk))

    def test_options_empty_iff_deadlocked(self, corpus, desk):
        system = corpus["readWriteR-buggy"].system
        g = explore(system, desk)
        deadlock = g.states_of(DEADLOCKED)[0]
        sess = new_session(system, desk)
        sess.current = deadlock
        assert step_options(sess) == []

    def test_no_event_session(self, desk):
        system = parse_system(
            "SYSTEM Inert VARIABLES x INVARIANT x : NAT INITIALISATION x := 0 EVENTS END"
        )
        assert step_options(new_session(system, desk)) == []


class TestReducedView:
    def test_single_node(self, corpus, desk):
        sess = new_session(corpus["readWrite"].system, desk)
        dot = reduced_view(sess.system, sess.scope, sess.visited, sess.edges)
        assert dot.startswith("digraph")
        node_lines = [
            line for line in dot.splitlines() if "[label=" in line and "->" not in line
        ]
        assert len(node_lines) == 1

    def test_toggle_two_nodes_two_edges(self, toggle, desk):
        sess = new_session(toggle, desk)
        fire(sess, ("on", ()))
        fire(sess, ("off", ()))
        dot = reduced_view(sess.system, sess.scope, sess.visited, sess.edges)
        assert dot.count("\n  s") == 2 + 2  # 2 node lines + 2 edge lines

    def test_node_count_matches_visited(self, corpus, desk):
        system = corpus["readWrite"].system
        log = random_animate(system, desk, 100, 11)
        dot = reduced_view(system, desk, log.visited, log.edges(system, desk))
        node_lines = [
            line for line in dot.splitlines() if "[label=" in line and "->" not in line
        ]
        assert len(node_lines) == len(log.visited)

    def test_same_signature_shares_color(self, toggle, desk):
        sess = new_session(toggle, desk)
        fire(sess, ("on", ()))
        fire(sess, ("off", ()))
        dot = reduced_view(sess.system, sess.scope, sess.visited, sess.edges)
        colors = [
            line.split('fillcolor="')[1].split('"')[0]
            for line in dot.splitlines()
            if "fillcolor" in line
        ]
        assert len(colors) == 2 and len(set(colors)) == 2  # {on}-enabled vs {off}-enabled
