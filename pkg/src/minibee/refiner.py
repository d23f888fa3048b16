"""Trace-based refinement checking.

Every trace of the refined system, with the events it newly introduces
hidden (they refine skip), must be a trace of the abstract system.  Labels
are event names only; bindings never take part in the comparison.  The
check determinizes the abstract graph over event names (subset
construction) and runs a breadth-first product of (refined node, abstract
node-set); the first refined common-alphabet step with no abstract
counterpart yields the shortest failing refined trace.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import AlphabetError
from .explorer import ExploreLimits, OPEN, StateGraph, explore
from .syntax import AbstractSystem
from .values import Binding, Scope, SysState, render_binding


@dataclass
class Alphabet:
    common: list[str]
    new_in_refined: list[str]


def split_alphabet(abstract: AbstractSystem, refined: AbstractSystem) -> Alphabet:
    refined_names = set(refined.event_names())
    missing = [n for n in abstract.event_names() if n not in refined_names]
    if missing:
        raise AlphabetError(
            f"abstract event(s) missing from the refined system: "
            f"{', '.join(missing)}"
        )
    common = [n for n in refined.event_names() if n in set(abstract.event_names())]
    new = [n for n in refined.event_names() if n not in set(abstract.event_names())]
    return Alphabet(common, new)


@dataclass
class RefinementReport:
    verdict: str  # "pass" | "fail" | "inconclusive"
    counterexample: list[tuple[str, Binding]] | None
    product_states: int
    hidden: list[str]
    divergence_warning: bool = False

    def render(self) -> str:
        lines = [f"refinement: {self.verdict}"]
        if self.hidden:
            lines.append(f"hidden new events: {', '.join(self.hidden)}")
        if self.divergence_warning:
            lines.append("warning: the hidden events can loop (divergence)")
        lines.append(f"product states visited: {self.product_states}")
        if self.counterexample is not None:
            lines.append("counterexample (refined trace):")
            for k, (event, binding) in enumerate(self.counterexample, start=1):
                tag = " [hidden]" if event in self.hidden else ""
                lines.append(f"  {k}: {event}({render_binding(binding)}){tag}")
        return "\n".join(lines) + "\n"


def _adjacency(g: StateGraph) -> dict[SysState, list]:
    adj: dict[SysState, list] = {s: [] for s in g.nodes}
    for t in g.transitions:
        adj[t.src].append(t)
    return adj


def _has_hidden_cycle(g: StateGraph, hidden: set[str]) -> bool:
    adj: dict[SysState, list[SysState]] = {s: [] for s in g.nodes}
    for t in g.transitions:
        if t.event in hidden:
            adj[t.src].append(t.dst)
    color: dict[SysState, int] = {}
    for start in g.nodes:
        if color.get(start, 0):
            continue
        stack = [(start, iter(adj[start]))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                c = color.get(nxt, 0)
                if c == 1:
                    return True
                if c == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(adj[nxt])))
                    break
            else:
                color[node] = 2
                stack.pop()
    return False


def check_refinement(
    abstract: AbstractSystem,
    refined: AbstractSystem,
    scope: Scope,
    limits: ExploreLimits | None = None,
) -> RefinementReport:
    alphabet = split_alphabet(abstract, refined)
    hidden = set(alphabet.new_in_refined)

    ga = explore(abstract, scope, limits)
    gr = explore(refined, scope, limits)
    abstract_complete = ga.count(OPEN) == 0
    refined_complete = gr.count(OPEN) == 0

    adj_a = _adjacency(ga)
    adj_r = _adjacency(gr)

    start = (gr.initial, frozenset({ga.initial}))
    parents: dict = {start: None}
    queue = deque([start])
    counterexample: list[tuple[str, Binding]] | None = None
    while queue:
        key = queue.popleft()
        r, aset = key
        for t in adj_r[r]:
            if t.event in hidden:
                step = (t.dst, aset)
                if step not in parents:
                    parents[step] = (key, t.event, t.binding)
                    queue.append(step)
                continue
            targets = frozenset(
                ta.dst for a in aset for ta in adj_a[a] if ta.event == t.event
            )
            if not targets:
                # No abstract counterpart; spurious only if the abstract
                # graph was cut short by limits.
                if abstract_complete:
                    counterexample = _path(parents, key) + [(t.event, t.binding)]
                break
            step = (t.dst, targets)
            if step not in parents:
                parents[step] = (key, t.event, t.binding)
                queue.append(step)
        if counterexample is not None:
            break

    divergence = _has_hidden_cycle(gr, hidden)
    if counterexample is not None:
        verdict = "fail"
    elif abstract_complete and refined_complete:
        verdict = "pass"
    else:
        verdict = "inconclusive"
    return RefinementReport(
        verdict=verdict,
        counterexample=counterexample,
        product_states=len(parents),
        hidden=alphabet.new_in_refined,
        divergence_warning=divergence,
    )


def _path(parents: dict, key) -> list[tuple[str, Binding]]:
    steps = []
    while parents[key] is not None:
        key, event, binding = parents[key]
        steps.append((event, binding))
    steps.reverse()
    return steps


def traces_to_depth(
    g: StateGraph, hide: set[str], depth: int
) -> set[tuple[str, ...]]:
    """All event-name traces of projected length <= depth, with `hide`
    events treated as internal stutter steps."""
    adj = _adjacency(g)

    closure_cache: dict[SysState, frozenset[SysState]] = {}

    def closure(state: SysState) -> frozenset[SysState]:
        if state in closure_cache:
            return closure_cache[state]
        seen = {state}
        stack = [state]
        while stack:
            s = stack.pop()
            for t in adj[s]:
                if t.event in hide and t.dst not in seen:
                    seen.add(t.dst)
                    stack.append(t.dst)
        out = frozenset(seen)
        closure_cache[state] = out
        return out

    suffix_cache: dict[tuple[SysState, int], frozenset[tuple[str, ...]]] = {}

    def suffixes(state: SysState, budget: int) -> frozenset[tuple[str, ...]]:
        key = (state, budget)
        if key in suffix_cache:
            return suffix_cache[key]
        out: set[tuple[str, ...]] = {()}
        if budget > 0:
            for s in closure(state):
                for t in adj[s]:
                    if t.event in hide:
                        continue
                    for rest in suffixes(t.dst, budget - 1):
                        out.add((t.event,) + rest)
        result = frozenset(out)
        suffix_cache[key] = result
        return result

    return set(suffixes(g.initial, depth))
