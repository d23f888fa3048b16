"""Independent brute-force oracles for the test suite.

Deliberately dumber than the engines they cross-check: plain recursive
enumeration over the evaluator primitives, no frontier bookkeeping, no
product construction.  Written before the explorer/refiner and kept free of
their code paths.

Like the explorer, invariant-violating states are recorded but never
expanded.  The trace oracle assumes hidden events cannot loop (true for the
bundled corpus, where every hidden event strictly shrinks a set).
"""

from __future__ import annotations

import sys

from minibee.evaluator import (
    apply_event,
    enabled_bindings,
    eval_pred,
    initial_state,
    resolve_constants,
)
from minibee.syntax import AbstractSystem
from minibee.values import Scope, SysState


def reachable_states(system: AbstractSystem, scope: Scope) -> set[SysState]:
    """Recursive depth-first enumeration with a hash set."""
    scope = resolve_constants(system, scope)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    seen: set[SysState] = set()

    def visit(state: SysState) -> None:
        if state in seen:
            return
        seen.add(state)
        if not eval_pred(system.invariant, state, (), scope):
            return
        for ev in system.events:
            for b in enabled_bindings(ev, state, scope):
                visit(apply_event(ev, b, state, scope))

    visit(initial_state(system, scope))
    return seen


def deadlocked_states(system: AbstractSystem, scope: Scope) -> set[SysState]:
    """Reachable, invariant-satisfying states with no enabled event."""
    scope = resolve_constants(system, scope)
    out = set()
    for state in reachable_states(system, scope):
        if not eval_pred(system.invariant, state, (), scope):
            continue
        if not any(enabled_bindings(ev, state, scope) for ev in system.events):
            out.add(state)
    return out


def trace_set(
    system: AbstractSystem,
    scope: Scope,
    hide: set[str],
    depth: int,
) -> set[tuple[str, ...]]:
    """All event-name traces of projected length <= depth; hidden events
    add no symbol.  Memoized per (state, remaining budget)."""
    scope = resolve_constants(system, scope)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    memo: dict[tuple[SysState, int], frozenset[tuple[str, ...]]] = {}

    def suffixes(state: SysState, budget: int) -> frozenset[tuple[str, ...]]:
        key = (state, budget)
        if key in memo:
            return memo[key]
        acc: set[tuple[str, ...]] = {()}
        if eval_pred(system.invariant, state, (), scope):
            for ev in system.events:
                for b in enabled_bindings(ev, state, scope):
                    post = apply_event(ev, b, state, scope)
                    if ev.name in hide:
                        acc |= suffixes(post, budget)
                    elif budget > 0:
                        acc |= {
                            (ev.name,) + rest for rest in suffixes(post, budget - 1)
                        }
        result = frozenset(acc)
        memo[key] = result
        return result

    return set(suffixes(initial_state(system, scope), depth))
