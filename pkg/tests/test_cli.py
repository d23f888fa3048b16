"""CLI tests: subcommands, exit codes, determinism of rendered output."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from minibee.cli import main

CLI = [sys.executable, "-m", "minibee.cli"]


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [*CLI, *args], capture_output=True, text=True, timeout=120
    )


class TestExitCodes:
    def test_explore_buggy_reports_findings(self):
        proc = run_cli("explore", "corpus:readWriteR-buggy", "--scope", "corpus:desk")
        assert proc.returncode == 1
        assert "deadlocked state:" in proc.stdout
        assert "endReading" in proc.stdout
        assert "nbActiveReaders > 1" in proc.stdout

    def test_explore_fixed_clean(self):
        proc = run_cli("explore", "corpus:readWriteR-fixed", "--scope", "corpus:desk")
        assert proc.returncode == 0
        assert "deadlocked          :0" in proc.stdout

    def test_check_missing_file(self):
        proc = run_cli("check", "nosuchfile.mbs")
        assert proc.returncode == 2
        assert "error:" in proc.stderr

    def test_check_corpus_entry(self):
        proc = run_cli("check", "corpus:readers")
        assert proc.returncode == 0

    def test_po_buggy_fails(self):
        proc = run_cli("po", "corpus:readWriteR-buggy", "--scope", "corpus:desk")
        assert proc.returncode == 1
        assert "deadlock-freeness : fail" in proc.stdout

    def test_refine_mutant_fails(self):
        proc = run_cli(
            "refine",
            "corpus:readWrite",
            "corpus:readWriteR-mutant",
            "--scope",
            "corpus:desk",
        )
        assert proc.returncode == 1
        assert "counterexample" in proc.stdout

    def test_cbc_mutant_finds_violation(self):
        proc = run_cli(
            "cbc",
            "corpus:readWriteR-mutant",
            "--scope",
            "corpus:desk",
            "--event",
            "writing",
        )
        assert proc.returncode == 1
        assert "violation by writing" in proc.stdout

    def test_bad_usage(self):
        assert main(["explore"]) == 2  # missing --scope


class TestCompose:
    def test_compose_writes_parseable_output(self, tmp_path, corpus):
        out = tmp_path / "out.mbs"
        src_a = tmp_path / "a.mbs"
        src_b = tmp_path / "b.mbs"
        src_a.write_text(corpus["readers"].source, encoding="utf-8")
        src_b.write_text(corpus["writers"].source, encoding="utf-8")
        proc = run_cli(
            "compose", str(src_a), str(src_b), "-o", str(out), "--name", "readWrite"
        )
        assert proc.returncode == 0
        from minibee.parser import parse_system

        composed = parse_system(out.read_text(encoding="utf-8"))
        assert composed.name == "readWrite"
        assert len(composed.events) == 8


class TestReportShape:
    def test_explore_sections_in_order(self):
        proc = run_cli("explore", "corpus:readWrite", "--scope", "corpus:desk")
        out = proc.stdout
        assert (
            out.index("NODES")
            < out.index("COVERED_OPERATIONS")
            < out.index("UNCOVERED_OPERATIONS")
        )
        for line in out.splitlines():
            if line.startswith(("deadlocked", "live", "open", "total", "invariant_")):
                assert ":" in line

    def test_explore_json(self):
        proc = run_cli(
            "explore", "corpus:readWrite", "--scope", "corpus:desk", "--format", "json"
        )
        payload = json.loads(proc.stdout)
        assert payload["coverage"]["classes"]["deadlocked"] == 0
        assert len(payload["nodes"]) == payload["coverage"]["total"]

    def test_explore_dot(self):
        proc = run_cli(
            "explore", "corpus:readWrite", "--scope", "corpus:desk", "--format", "dot"
        )
        assert proc.stdout.startswith("digraph")

    def test_animate_dot(self):
        proc = run_cli(
            "animate",
            "corpus:readWrite",
            "--scope",
            "corpus:desk",
            "--steps",
            "10",
            "--seed",
            "4",
            "--format",
            "dot",
        )
        assert proc.stdout.startswith("digraph")


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ("explore", "corpus:readWriteR-buggy", "--scope", "corpus:desk", "--dump"),
            (
                "animate",
                "corpus:readWriteR-fixed",
                "--scope",
                "corpus:desk",
                "--steps",
                "40",
                "--seed",
                "0",
            ),
            ("po", "corpus:readWrite", "--scope", "corpus:desk"),
            (
                "refine",
                "corpus:readWrite",
                "corpus:readWriteR-fixed",
                "--scope",
                "corpus:desk",
            ),
        ],
        ids=["explore", "animate", "po", "refine"],
    )
    def test_byte_identical_across_runs(self, args):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.stdout.strip()
        assert first.returncode == second.returncode
