"""Exhaustive breadth-first state exploration and its analyses.

Nodes are classified live / open / deadlocked / invariant_violated:
states violating the invariant are recorded but never expanded; a
deadlocked state satisfies the invariant and has no enabled event; "open"
only exists when exploration limits cut the run short.  Everything is
deterministic: FIFO frontier, successors ordered by event declaration order
then binding order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ScopeError, StateSpaceTooLarge, WellDefinednessError
from .evaluator import (
    apply_event,
    enabled_bindings,
    enumerate_bindings,
    eval_pred,
    initial_state,
    resolve_constants,
    typed_state_count,
    typed_state_space,
)
from .printer import render_pred
from .syntax import AbstractSystem, Pred, conjuncts
from .values import Binding, Scope, SysState, render_binding

LIVE = "live"
OPEN = "open"
DEADLOCKED = "deadlocked"
INVARIANT_VIOLATED = "invariant_violated"

NODE_CLASSES = (DEADLOCKED, INVARIANT_VIOLATED, LIVE, OPEN)


@dataclass
class ExploreLimits:
    """Optional exploration caps; None means unlimited."""

    max_nodes: int | None = None
    max_depth: int | None = None


class Transition(NamedTuple):
    src: SysState
    event: str
    binding: Binding
    dst: SysState


@dataclass
class NodeInfo:
    uid: int
    classification: str
    depth: int


@dataclass
class WdFinding:
    """A well-definedness failure surfaced during exploration; a first-class
    finding, not a crash."""

    state: SysState
    event: str
    message: str


@dataclass
class StateGraph:
    system: AbstractSystem
    scope: Scope
    initial: SysState
    nodes: dict[SysState, NodeInfo]
    transitions: list[Transition]
    wd_findings: list[WdFinding]

    def count(self, classification: str) -> int:
        return sum(
            1 for info in self.nodes.values() if info.classification == classification
        )

    def states_of(self, classification: str) -> list[SysState]:
        return [
            s for s, info in self.nodes.items() if info.classification == classification
        ]

    def uid_of(self, state: SysState) -> int:
        return self.nodes[state].uid

    def dump(self) -> str:
        """Line-oriented canonical dump: one `class TAB state` line per node
        (in discovery order), then one `src TAB event TAB binding TAB dst`
        line per transition."""
        lines = [
            f"{info.classification}\t{state.canonical()}"
            for state, info in self.nodes.items()
        ]
        for t in self.transitions:
            lines.append(
                f"{self.uid_of(t.src)}\t{t.event}\t{render_binding(t.binding)}"
                f"\t{self.uid_of(t.dst)}"
            )
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        colors = {
            DEADLOCKED: "#e06666",
            INVARIANT_VIOLATED: "#f6b26b",
            OPEN: "#cccccc",
            LIVE: "#ffffff",
        }
        out = ["digraph state_graph {", "  node [shape=box, style=filled];"]
        for state, info in self.nodes.items():
            label = state.canonical().replace('"', '\\"')
            out.append(
                f'  n{info.uid} [label="{label}", '
                f'fillcolor="{colors[info.classification]}"];'
            )
        for t in self.transitions:
            out.append(
                f'  n{self.uid_of(t.src)} -> n{self.uid_of(t.dst)} '
                f'[label="{t.event}"];'
            )
        out.append("}")
        return "\n".join(out) + "\n"


def explore(
    system: AbstractSystem,
    scope: Scope,
    limits: ExploreLimits | None = None,
) -> StateGraph:
    """Breadth-first exhaustive exploration from the initial state."""
    limits = limits or ExploreLimits()
    scope = resolve_constants(system, scope)
    init = initial_state(system, scope)

    nodes: dict[SysState, NodeInfo] = {init: NodeInfo(0, OPEN, 0)}
    transitions: list[Transition] = []
    findings: list[WdFinding] = []
    queue: deque[SysState] = deque([init])

    while queue:
        state = queue.popleft()
        info = nodes[state]
        if limits.max_nodes is not None and len(nodes) >= limits.max_nodes:
            continue  # stays open
        if limits.max_depth is not None and info.depth >= limits.max_depth:
            continue  # stays open

        inv_ok, wd = _eval_invariant(system, state, scope)
        if wd is not None:
            findings.append(WdFinding(state, "<invariant>", wd))
        if not inv_ok:
            info.classification = INVARIANT_VIOLATED
            continue

        n_succ = 0
        for ev in system.events:
            try:
                bindings = enabled_bindings(ev, state, scope)
            except WellDefinednessError as exc:
                findings.append(WdFinding(state, ev.name, str(exc)))
                continue
            for b in bindings:
                try:
                    dst = apply_event(ev, b, state, scope)
                except WellDefinednessError as exc:
                    findings.append(WdFinding(state, ev.name, str(exc)))
                    continue
                if dst not in nodes:
                    nodes[dst] = NodeInfo(len(nodes), OPEN, info.depth + 1)
                    queue.append(dst)
                transitions.append(Transition(state, ev.name, b, dst))
                n_succ += 1
        info.classification = DEADLOCKED if n_succ == 0 else LIVE

    return StateGraph(system, scope, init, nodes, transitions, findings)


def _eval_invariant(
    system: AbstractSystem, state: SysState, scope: Scope
) -> tuple[bool, str | None]:
    """A state whose invariant is not well-defined cannot be certified, so
    it counts as violating; the message is reported alongside."""
    try:
        return eval_pred(system.invariant, state, (), scope), None
    except WellDefinednessError as exc:
        return False, str(exc)


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------


@dataclass
class CoverageReport:
    class_counts: dict[str, int]
    total: int
    event_counts: dict[str, int]  # declaration order
    covered: list[str]
    uncovered: list[str]

    def render(self) -> str:
        width = 20
        lines = ["NODES"]
        for cls in NODE_CLASSES:
            lines.append(f"{cls.ljust(width)}:{self.class_counts[cls]}")
        lines.append(f"{'total'.ljust(width)}:{self.total}")
        lines.append("COVERED_OPERATIONS")
        for name in self.covered:
            lines.append(f"{name.ljust(width)}:{self.event_counts[name]}")
        lines.append("UNCOVERED_OPERATIONS")
        for name in self.uncovered:
            lines.append(name)
        return "\n".join(lines) + "\n"


def coverage_report(g: StateGraph) -> CoverageReport:
    event_counts = {ev.name: 0 for ev in g.system.events}
    for t in g.transitions:
        event_counts[t.event] += 1
    return CoverageReport(
        class_counts={cls: g.count(cls) for cls in NODE_CLASSES},
        total=len(g.nodes),
        event_counts=event_counts,
        covered=[name for name, k in event_counts.items() if k > 0],
        uncovered=[name for name, k in event_counts.items() if k == 0],
    )


# ---------------------------------------------------------------------------
# Deadlock diagnosis
# ---------------------------------------------------------------------------


@dataclass
class DisabledReason:
    event: str
    binding: Binding | None  # first candidate probed; None if no candidate
    conjunct_index: int  # 1-based position in the guard
    conjunct: str
    note: str = ""

    def render(self) -> str:
        where = f" under {render_binding(self.binding)}" if self.binding else ""
        note = f" ({self.note})" if self.note else ""
        return (
            f"{self.event}: conjunct {self.conjunct_index} "
            f"`{self.conjunct}` fails{where}{note}"
        )


@dataclass
class DeadlockDiagnosis:
    state: SysState
    reasons: list[DisabledReason]

    def render(self) -> str:
        lines = [f"deadlocked state: {self.state.canonical()}"]
        for r in self.reasons:
            lines.append(f"  {r.render()}")
        return "\n".join(lines)


def _disabled_reason(ev, state: SysState, scope: Scope) -> DisabledReason:
    """Why is a (disabled) event disabled here?  Probe the first candidate
    binding from the typing domains and name the first failing conjunct; if
    some typing domain is empty, that conjunct itself is the reason."""
    guard_conjs = conjuncts(ev.guard)
    candidate: Binding | None = None
    try:
        candidate = next(iter(enumerate_bindings(ev.params, state, (), scope)))
    except StopIteration:
        candidate = None
    except WellDefinednessError as exc:
        return DisabledReason(ev.name, None, 1, render_pred(guard_conjs[0]), str(exc))
    if candidate is None and ev.params:
        # Walk the domains to find the first one that came up empty.
        partial: Binding = ()
        for k, (pname, domain) in enumerate(ev.params):
            firsts = list(enumerate_bindings([(pname, domain)], state, partial, scope))
            if not firsts:
                return DisabledReason(
                    ev.name,
                    None,
                    k + 1,
                    render_pred(guard_conjs[k]),
                    "typing domain is empty",
                )
            partial = firsts[0]
        candidate = partial
    for i, conj in enumerate(guard_conjs):
        try:
            ok = eval_pred(conj, state, candidate or (), scope)
        except WellDefinednessError as exc:
            return DisabledReason(
                ev.name, candidate, i + 1, render_pred(conj), str(exc)
            )
        if not ok:
            return DisabledReason(ev.name, candidate, i + 1, render_pred(conj))
    raise AssertionError(f"event {ev.name} is not disabled at {state.canonical()}")


def explain_disabled(
    system: AbstractSystem, state: SysState, scope: Scope
) -> list[DisabledReason]:
    """find_deadlocks-style reasons for every event that is disabled at
    `state` (the scope must be resolved)."""
    return [
        _disabled_reason(ev, state, scope)
        for ev in system.events
        if not enabled_bindings(ev, state, scope)
    ]


def find_deadlocks(g: StateGraph) -> list[DeadlockDiagnosis]:
    """One diagnosis per deadlocked node: the full canonical state plus, per
    event, the reason it is disabled."""
    out = []
    for state in g.states_of(DEADLOCKED):
        reasons = [_disabled_reason(ev, state, g.scope) for ev in g.system.events]
        out.append(DeadlockDiagnosis(state, reasons))
    return out


# ---------------------------------------------------------------------------
# Pointwise invariant analysis
# ---------------------------------------------------------------------------


class ConjunctFailure(NamedTuple):
    state: SysState
    index: int  # 1-based top-level conjunct position
    conjunct: str


def check_invariant_pointwise(
    system: AbstractSystem, scope: Scope, g: StateGraph
) -> list[ConjunctFailure]:
    """Split the invariant at top-level conjunctions and evaluate every
    conjunct on every reachable state; return all failures."""
    scope = resolve_constants(system, scope)
    parts = conjuncts(system.invariant)
    failures: list[ConjunctFailure] = []
    for state in g.nodes:
        for i, part in enumerate(parts):
            try:
                ok = eval_pred(part, state, (), scope)
            except WellDefinednessError:
                ok = False
            if not ok:
                failures.append(ConjunctFailure(state, i + 1, render_pred(part)))
    return failures


# ---------------------------------------------------------------------------
# Constraint-based checking
# ---------------------------------------------------------------------------


@dataclass
class CBCResult:
    event: str
    violation: tuple[SysState, Binding, SysState] | None
    failed_conjunct: str | None
    states_examined: int
    invariant_states: int
    firings: int

    @property
    def found(self) -> bool:
        return self.violation is not None

    def render(self) -> str:
        if not self.found:
            return (
                f"no violation: event {self.event} applied {self.firings} time(s) "
                f"over {self.invariant_states} invariant state(s) "
                f"({self.states_examined} typed states examined)\n"
            )
        pre, binding, post = self.violation
        return (
            f"violation by {self.event}({render_binding(binding)})\n"
            f"  from : {pre.canonical()}\n"
            f"  to   : {post.canonical()}\n"
            f"  fails: {self.failed_conjunct}\n"
        )


DEFAULT_CEILING = 200_000


def constraint_based_check(
    system: AbstractSystem,
    scope: Scope,
    event: str,
    ceiling: int = DEFAULT_CEILING,
) -> CBCResult:
    """Search every invariant-satisfying *typed* state (reachable or not)
    for an application of `event` whose post-state violates the invariant;
    report the first, in enumeration order."""
    scope = resolve_constants(system, scope)
    try:
        ev = system.event(event)
    except KeyError:
        raise ScopeError(f"no event named {event!r}") from None
    count = typed_state_count(system, scope)
    if count > ceiling:
        raise StateSpaceTooLarge(
            f"{count} typed states exceed the ceiling of {ceiling}; "
            "shrink the scope"
        )
    parts = conjuncts(system.invariant)
    examined = inv_states = firings = 0
    for state in typed_state_space(system, scope):
        examined += 1
        if not _holds(system.invariant, state, scope):
            continue
        inv_states += 1
        for b in enabled_bindings(ev, state, scope):
            firings += 1
            post = apply_event(ev, b, state, scope)
            if not _holds(system.invariant, post, scope):
                failing = next(
                    (render_pred(p) for p in parts if not _holds(p, post, scope)),
                    None,
                )
                return CBCResult(event, (state, b, post), failing, examined, inv_states, firings)
    return CBCResult(event, None, None, examined, inv_states, firings)


def _holds(p: Pred, state: SysState, scope: Scope) -> bool:
    try:
        return eval_pred(p, state, (), scope)
    except WellDefinednessError:
        return False
