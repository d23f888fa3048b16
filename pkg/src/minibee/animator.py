"""Random and interactive animation, plus the reduced visited-state view.

Random choice uses a fixed linear congruential generator (the glibc
constants: x' = (1103515245*x + 12345) mod 2**31) so that a (system, scope,
steps, seed) quadruple replays identically anywhere; the choice is uniform
over enabled (event, binding) pairs, not over event names.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyHistory, IllegalChoice, WellDefinednessError
from .evaluator import (
    all_options,
    apply_event,
    eval_pred,
    initial_state,
    resolve_constants,
)
from .printer import render_pred
from .syntax import AbstractSystem, conjuncts
from .values import Binding, Scope, SysState, render_binding

LCG_MULTIPLIER = 1103515245
LCG_INCREMENT = 12345
LCG_MODULUS = 2**31


class Lcg:
    def __init__(self, seed: int):
        self.state = seed % LCG_MODULUS

    def next(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state


STEP_BUDGET = "step-budget"
DEADLOCK = "deadlock"


@dataclass
class AnimationLog:
    seed: int
    steps: list[tuple[str, Binding, SysState]]
    visited: list[SysState]  # first-visit order; membership is set-like
    terminated_reason: str  # STEP_BUDGET or DEADLOCK

    def render_lines(self) -> list[str]:
        return [
            f"step {i + 1}: {event}({render_binding(binding)}) -> {post.canonical()}"
            for i, (event, binding, post) in enumerate(self.steps)
        ]

    def event_counts(self, system: AbstractSystem) -> dict[str, int]:
        counts = {ev.name: 0 for ev in system.events}
        for event, _, _ in self.steps:
            counts[event] += 1
        return counts

    def edges(self, system: AbstractSystem, scope: Scope) -> list[tuple[SysState, str, SysState]]:
        out = []
        prev = initial_state(system, resolve_constants(system, scope))
        for event, _, post in self.steps:
            out.append((prev, event, post))
            prev = post
        return out


def random_animate(
    system: AbstractSystem, scope: Scope, steps: int, seed: int
) -> AnimationLog:
    """Animate up to `steps` transitions from the initial state, choosing
    uniformly among enabled (event, binding) pairs with the seeded LCG;
    stops early on deadlock."""
    scope = resolve_constants(system, scope)
    state = initial_state(system, scope)
    rng = Lcg(seed)
    log = AnimationLog(seed, [], [state], STEP_BUDGET)
    seen = {state}
    for _ in range(steps):
        options = all_options(system, state, scope)
        if not options:
            log.terminated_reason = DEADLOCK
            break
        event, binding = options[rng.next() % len(options)]
        state = apply_event(system.event(event), binding, state, scope)
        log.steps.append((event, binding, state))
        if state not in seen:
            seen.add(state)
            log.visited.append(state)
    return log


# ---------------------------------------------------------------------------
# Interactive sessions
# ---------------------------------------------------------------------------


@dataclass
class Session:
    """Single-owner interactive animation: one mutator at a time."""

    system: AbstractSystem
    scope: Scope  # resolved
    current: SysState
    history: list[tuple[str, Binding, SysState]] = field(default_factory=list)
    visited: list[SysState] = field(default_factory=list)
    edges: list[tuple[SysState, str, SysState]] = field(default_factory=list)

    def invariant_conjunct_values(self) -> list[tuple[str, bool]]:
        out = []
        for part in conjuncts(self.system.invariant):
            try:
                value = eval_pred(part, self.current, (), self.scope)
            except WellDefinednessError:
                value = False
            out.append((render_pred(part), value))
        return out


def new_session(system: AbstractSystem, scope: Scope) -> Session:
    scope = resolve_constants(system, scope)
    init = initial_state(system, scope)
    return Session(system, scope, init, visited=[init])


def step_options(sess: Session) -> list[tuple[str, Binding]]:
    """Enabled (event, binding) pairs at the current state, in deterministic
    order; empty exactly when the current state is a deadlock."""
    return all_options(sess.system, sess.current, sess.scope)


def fire(sess: Session, choice: tuple[str, Binding]) -> Session:
    """Apply one enabled option; stale choices raise IllegalChoice."""
    if choice not in step_options(sess):
        event, binding = choice
        raise IllegalChoice(
            f"{event}({render_binding(binding)}) is not enabled at the current state"
        )
    event, binding = choice
    prior = sess.current
    sess.current = apply_event(sess.system.event(event), binding, prior, sess.scope)
    sess.history.append((event, binding, prior))
    if sess.current not in sess.visited:
        sess.visited.append(sess.current)
    edge = (prior, event, sess.current)
    if edge not in sess.edges:
        sess.edges.append(edge)
    return sess


def undo(sess: Session) -> Session:
    """Pop exactly one history entry; the visited set only grows."""
    if not sess.history:
        raise EmptyHistory("nothing to undo")
    _, _, prior = sess.history.pop()
    sess.current = prior
    return sess


# ---------------------------------------------------------------------------
# Reduced visited-state view
# ---------------------------------------------------------------------------

_PALETTE = [
    "#a6cee3",
    "#b2df8a",
    "#fdbf6f",
    "#cab2d6",
    "#fb9a99",
    "#ffff99",
    "#1f78b4",
    "#33a02c",
    "#ff7f00",
    "#6a3d9a",
    "#e31a1c",
    "#b15928",
]


def reduced_view(
    system: AbstractSystem,
    scope: Scope,
    visited: list[SysState],
    edges: list[tuple[SysState, str, SysState]],
) -> str:
    """DOT digraph over the visited states; the "reduction" is visual
    grouping: states with the same enabled-event-name set share a fill
    color.  Edges carry event names (one edge per src/event/dst)."""
    scope = resolve_constants(system, scope)
    signature_color: dict[tuple[str, ...], str] = {}
    out = ["digraph visited_states {", "  node [shape=box, style=filled];"]
    ids = {state: i for i, state in enumerate(visited)}
    for state, i in ids.items():
        signature = tuple(
            sorted({event for event, _ in all_options(system, state, scope)})
        )
        if signature not in signature_color:
            signature_color[signature] = _PALETTE[
                len(signature_color) % len(_PALETTE)
            ]
        label = state.canonical().replace('"', '\\"')
        out.append(
            f'  s{i} [label="{label}", fillcolor="{signature_color[signature]}"];'
        )
    seen = set()
    for src, event, dst in edges:
        if src not in ids or dst not in ids or (src, event, dst) in seen:
            continue
        seen.add((src, event, dst))
        out.append(f'  s{ids[src]} -> s{ids[dst]} [label="{event}"];')
    out.append("}")
    return "\n".join(out) + "\n"
