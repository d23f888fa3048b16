"""Parallel composition of abstract systems.

The composite takes the union of carrier sets, constants, and variables,
conjoins properties and invariants, runs both initialisations in parallel
(assignments to shared variables must be syntactically identical and are
collapsed to one), and concatenates the event lists.  Shared variables are
the communication mechanism; event names must be disjoint.
"""

from __future__ import annotations

from .check import validate_system
from .errors import EventClash, SharedInitConflict, TypeClash
from .syntax import (
    AbstractSystem,
    And,
    Assign,
    CarrierSetDecl,
    Parallel,
    Truth,
)


def compose(
    s1: AbstractSystem, s2: AbstractSystem, name: str | None = None
) -> AbstractSystem:
    """Compose two validated systems; the result is validated again."""
    clashes = set(s1.event_names()) & set(s2.event_names())
    if clashes:
        raise EventClash(
            f"event name(s) in both systems: {', '.join(sorted(clashes))}"
        )

    for v in s1.variables:
        if v in s2.variables and s1.var_types[v] != s2.var_types[v]:
            raise TypeClash(
                f"shared variable {v!r} has type {s1.var_types[v]} in "
                f"{s1.name} but {s2.var_types[v]} in {s2.name}"
            )
    for c in s1.constants:
        if c in s2.constants and s1.constant_types[c] != s2.constant_types[c]:
            raise TypeClash(f"shared constant {c!r} typed differently")

    sets = [CarrierSetDecl(n) for n in s1.set_names()]
    sets += [CarrierSetDecl(n) for n in s2.set_names() if n not in s1.set_names()]
    constants = list(s1.constants) + [
        c for c in s2.constants if c not in s1.constants
    ]
    variables = list(s1.variables) + [
        v for v in s2.variables if v not in s1.variables
    ]

    init1 = {a.var: a for a in s1.init.assigns}
    assigns: list[Assign] = [Assign(a.var, a.rhs) for a in s1.init.assigns]
    for a in s2.init.assigns:
        prior = init1.get(a.var)
        if prior is None:
            assigns.append(Assign(a.var, a.rhs))
        elif prior.rhs != a.rhs:
            raise SharedInitConflict(
                f"shared variable {a.var!r} initialised differently "
                f"({s1.name} vs {s2.name})"
            )

    def conj(p1, p2):
        if isinstance(p1, Truth) and p1.value:
            return p2
        if isinstance(p2, Truth) and p2.value:
            return p1
        return And(p1, p2)

    composite = AbstractSystem(
        name=name or f"{s1.name}_{s2.name}",
        sets=sets,
        constants=constants,
        properties=conj(s1.properties, s2.properties),
        variables=variables,
        invariant=And(s1.invariant, s2.invariant),
        init=Parallel(assigns),
        events=list(s1.events) + list(s2.events),
    )
    return validate_system(composite)


def compose_all(
    systems: list[AbstractSystem], name: str | None = None
) -> AbstractSystem:
    """Left fold of compose over a nonempty list."""
    if not systems:
        raise ValueError("compose_all needs at least one system")
    out = systems[0]
    for s in systems[1:]:
        out = compose(out, s)
    if name is not None:
        out.name = name
    return out
