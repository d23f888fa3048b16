"""Bundled-corpus tests: integrity, expected findings, reconstruction notes."""

from __future__ import annotations

import pytest

from minibee.corpus import desk_scope, load_corpus, load_entry
from minibee.errors import CorpusCorrupt
from minibee.explorer import DEADLOCKED, INVARIANT_VIOLATED, explore
from minibee.printer import render_pred
from minibee.syntax import conjuncts


class TestLoadCorpus:
    def test_at_least_eight_entries(self):
        assert len(load_corpus()) >= 8

    def test_expected_ids(self):
        ids = {e.id for e in load_corpus()}
        assert {
            "readers",
            "writers",
            "readWrite",
            "readersR",
            "writersR",
            "readWriteR-buggy",
            "readWriteR-fixed",
            "readWriteR-mutant",
        } <= ids

    def test_readwrite_event_list(self, corpus):
        assert corpus["readWrite"].system.event_names() == [
            "want2read",
            "reading",
            "endReading",
            "newReader",
            "want2write",
            "writing",
            "endWriting",
            "newWriter",
        ]

    def test_unknown_entry(self):
        with pytest.raises(CorpusCorrupt):
            load_entry("nonesuch")


class TestExpectedFindings:
    @pytest.mark.parametrize("entry", load_corpus(), ids=lambda e: e.id)
    def test_deadlock_expectation(self, entry):
        if "deadlock" not in entry.expected:
            pytest.skip("no deadlock expectation recorded")
        g = explore(entry.system, desk_scope())
        assert (g.count(DEADLOCKED) > 0) == entry.expected["deadlock"]

    @pytest.mark.parametrize("entry", load_corpus(), ids=lambda e: e.id)
    def test_violation_expectation(self, entry):
        if "invariant_violations" not in entry.expected:
            pytest.skip("no violation expectation recorded")
        g = explore(entry.system, desk_scope())
        assert (g.count(INVARIANT_VIOLATED) > 0) == entry.expected[
            "invariant_violations"
        ]

    def test_buggy_deadlocks_at_tiny_scopes_too(self, corpus):
        # The lone-reader bug needs no crowd: a single reader strands itself
        # as soon as it is the only active one.
        from minibee.values import Scope

        g_small = explore(
            corpus["readWriteR-buggy"].system,
            Scope({"READER": 1, "WRITER": 1}, {"maxConsecutiveR": 2}),
        )
        g_desk = explore(corpus["readWriteR-buggy"].system, desk_scope())
        assert g_desk.count(DEADLOCKED) >= 1
        assert g_small.count(DEADLOCKED) >= 1

    def test_fixed_and_buggy_differ_in_one_conjunct(self, corpus):
        buggy = corpus["readWriteR-buggy"].system
        fixed = corpus["readWriteR-fixed"].system
        assert buggy.event_names() == fixed.event_names()
        diffs = []
        for eb, ef in zip(buggy.events, fixed.events):
            for cb, cf in zip(conjuncts(eb.guard), conjuncts(ef.guard)):
                if cb != cf:
                    diffs.append((eb.name, render_pred(cb), render_pred(cf)))
            assert eb.action == ef.action
        assert diffs == [("endReading", "nbActiveReaders > 1", "nbActiveReaders >= 1")]

    def test_stored_paths_replay(self, corpus):
        # The manifest's frozen deadlock/violation paths must stay replayable.
        from minibee.animator import fire, new_session, step_options

        for entry_id, path_key, final_check in (
            ("readWriteR-buggy", "deadlock_path", "deadlock"),
            ("readWriteR-mutant", "violation_path", "violation"),
        ):
            entry = corpus[entry_id]
            path = entry.expected[path_key]
            sess = new_session(entry.system, desk_scope())
            for step in path:
                match = [
                    (event, binding)
                    for event, binding in step_options(sess)
                    if event == step["event"]
                    and {n: f"{v.carrier}{v.index}" for n, v in binding}
                    == step["binding"]
                ]
                assert match, f"{entry_id}: step {step} not enabled"
                fire(sess, match[0])
            if final_check == "deadlock":
                assert step_options(sess) == []
            else:
                failing = [
                    text
                    for text, value in sess.invariant_conjunct_values()
                    if not value
                ]
                assert failing == [
                    "not(card(activeWriter) = 1 & card(activeReaders) >= 1)"
                ]
