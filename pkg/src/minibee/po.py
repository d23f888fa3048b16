"""Proof-obligation generation and bounded finite-scope discharge.

Per system: one initialisation obligation, one invariant-preservation
obligation per event (schema `Inv & P => [GS] Inv`), and one
deadlock-freeness obligation (`Inv => some guard is satisfiable`).
Discharge is exhaustive over every well-typed state of the scope —
reachable or not — which makes preservation strictly stronger than
reachable-state checking.  `[GS]Inv` is computed operationally (execute,
then evaluate), valid because actions are deterministic given a binding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StateSpaceTooLarge, WellDefinednessError
from .evaluator import (
    apply_event,
    enumerate_bindings,
    eval_pred,
    initial_state,
    resolve_constants,
    typed_state_count,
    typed_state_space,
)
from .printer import render_pred, render_subst
from .syntax import (
    AbstractSystem,
    And,
    Exists,
    Or,
    Parallel,
    Pred,
    Truth,
)
from .values import Binding, Scope, SysState, render_binding

INITIALISATION = "initialisation"
PRESERVATION = "invariant-preservation"
DEADLOCK_FREENESS = "deadlock-freeness"

PASS = "pass"
FAIL = "fail"
VACUOUS_PASS = "vacuous-pass"
ABORTED = "aborted"

DEFAULT_CEILING = 200_000


@dataclass
class ProofObligation:
    kind: str
    hypothesis: Pred
    substitution: Parallel | None
    goal: Pred
    event: str | None = None

    def render(self) -> str:
        goal = f"({render_pred(self.goal)})"
        if self.substitution is not None:
            goal = f"[{render_subst(self.substitution)}] {goal}"
        return f"{render_pred(self.hypothesis)} => {goal}"

    def label(self) -> str:
        return f"{self.kind} [{self.event}]" if self.event else self.kind


@dataclass
class DischargeResult:
    status: str
    witness: tuple[SysState, Binding | None] | None
    states_examined: int

    def render(self, po: ProofObligation) -> str:
        line = f"{po.label()} : {self.status} ({self.states_examined})"
        if self.witness is not None:
            state, binding = self.witness
            line += f"\n  witness state  : {state.canonical()}"
            if binding:
                line += f"\n  witness binding: {render_binding(binding)}"
        return line


def generate_pos(system: AbstractSystem) -> list[ProofObligation]:
    """Initialisation first, preservation per event in declaration order,
    deadlock-freeness last."""
    pos = [
        ProofObligation(
            kind=INITIALISATION,
            hypothesis=Truth(True),
            substitution=system.init,
            goal=system.invariant,
        )
    ]
    for ev in system.events:
        pos.append(
            ProofObligation(
                kind=PRESERVATION,
                hypothesis=And(system.invariant, ev.guard),
                substitution=ev.action,
                goal=system.invariant,
                event=ev.name,
            )
        )
    enabled_preds: list[Pred] = [
        Exists(ev.params, ev.guard) if ev.params else ev.guard
        for ev in system.events
    ]
    some_guard: Pred = Truth(False)
    if enabled_preds:
        some_guard = enabled_preds[0]
        for p in enabled_preds[1:]:
            some_guard = Or(some_guard, p)
    pos.append(
        ProofObligation(
            kind=DEADLOCK_FREENESS,
            hypothesis=system.invariant,
            substitution=None,
            goal=some_guard,
        )
    )
    return pos


def discharge_bounded(
    po: ProofObligation,
    system: AbstractSystem,
    scope: Scope,
    ceiling: int = DEFAULT_CEILING,
) -> DischargeResult:
    """Evaluate the obligation over the whole typed state space.

    Raises StateSpaceTooLarge when the space exceeds the ceiling.  A
    well-definedness failure anywhere in hypothesis, substitution, or goal
    is a fail with that witness.  The reported witness is deterministic:
    the failing state lowest in canonical order (first binding in
    enumeration order on ties)."""
    scope = resolve_constants(system, scope)

    if po.kind == INITIALISATION:
        state = initial_state(system, scope)
        try:
            ok = eval_pred(po.goal, state, (), scope)
        except WellDefinednessError:
            ok = False
        if ok:
            return DischargeResult(PASS, None, 1)
        return DischargeResult(FAIL, (state, None), 1)

    total = typed_state_count(system, scope)
    if total > ceiling:
        raise StateSpaceTooLarge(
            f"{total} typed states exceed the ceiling of {ceiling}; shrink the scope"
        )

    params = []
    if po.event is not None:
        params = system.event(po.event).params

    satisfied = 0
    failures: list[tuple[SysState, Binding | None]] = []
    for state in typed_state_space(system, scope):
        for binding in enumerate_bindings(params, state, (), scope):
            try:
                if not eval_pred(po.hypothesis, state, binding, scope):
                    continue
            except WellDefinednessError:
                failures.append((state, binding or None))
                continue
            satisfied += 1
            post = state
            try:
                if po.substitution is not None and po.event is not None:
                    post = apply_event(
                        system.event(po.event), binding, state, scope
                    )
                ok = eval_pred(po.goal, post, binding, scope)
            except WellDefinednessError:
                ok = False
            if not ok:
                failures.append((state, binding or None))
    if failures:
        witness = min(failures, key=lambda w: w[0].canonical())
        return DischargeResult(FAIL, witness, total)
    if satisfied == 0:
        return DischargeResult(VACUOUS_PASS, None, total)
    return DischargeResult(PASS, None, total)


def discharge_all(
    system: AbstractSystem,
    scope: Scope,
    ceiling: int = DEFAULT_CEILING,
) -> list[tuple[ProofObligation, DischargeResult]]:
    """Generate and discharge every obligation; a space over the ceiling
    aborts that obligation instead of raising."""
    out = []
    for po in generate_pos(system):
        try:
            result = discharge_bounded(po, system, scope, ceiling)
        except StateSpaceTooLarge:
            result = DischargeResult(ABORTED, None, 0)
        out.append((po, result))
    return out
