"""Abstract syntax for guarded-event abstract systems.

The tree is deliberately small: predicates over set membership, inclusion,
equality and arithmetic comparisons; expressions over finite sets of carrier
elements and naturals; actions restricted to parallel simultaneous
assignment.  Structural equality (dataclass equality) is the round-trip
contract of the parser/printer pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

# ---------------------------------------------------------------------------
# Static types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NatTy:
    def __str__(self) -> str:
        return "NAT"


@dataclass(frozen=True)
class ElemTy:
    carrier: str

    def __str__(self) -> str:
        return self.carrier


@dataclass(frozen=True)
class SetTy:
    carrier: str | None  # None: empty-set literal whose carrier is unconstrained

    def __str__(self) -> str:
        return f"POW({self.carrier or '?'})"


Ty = Union[NatTy, ElemTy, SetTy]

NAT = NatTy()


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass
class Name:
    """Reference to a variable, constant, bound parameter, carrier set, or a
    carrier element written CARRIERi (e.g. READER2)."""

    name: str


@dataclass
class NatLit:
    value: int


@dataclass
class SetLit:
    """Set display {a, b}; empty list renders as {}."""

    items: list[Expr]


@dataclass
class BinOp:
    """op is one of "\\/" (union), "/\\" (intersection), "-" (set difference
    or partial natural subtraction), "+" (natural addition)."""

    op: str
    left: Expr
    right: Expr


@dataclass
class Card:
    arg: Expr


Expr = Union[Name, NatLit, SetLit, BinOp, Card]


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


@dataclass
class Truth:
    value: bool


@dataclass
class Compare:
    """op is one of ":", "/:", "<:", "=", "/=", "<=", "<", ">=", ">"."""

    op: str
    left: Expr
    right: Expr


@dataclass
class Not:
    body: Pred


@dataclass
class And:
    left: Pred
    right: Pred


@dataclass
class Or:
    left: Pred
    right: Pred


@dataclass
class Implies:
    left: Pred
    right: Pred


@dataclass
class Exists:
    """Existential closure over typed bound variables.

    Not part of the concrete grammar: built internally for deadlock-freeness
    proof obligations ("some binding enables the guard") and rendered as
    #(x,y).(P).
    """

    params: list[tuple[str, Expr]]
    body: Pred


Pred = Union[Truth, Compare, Not, And, Or, Implies, Exists]


def conjuncts(p: Pred) -> list[Pred]:
    """Flatten nested conjunctions into the list of top-level conjuncts."""
    if isinstance(p, And):
        return conjuncts(p.left) + conjuncts(p.right)
    return [p]


def conjoin(parts: list[Pred]) -> Pred:
    """Left fold of & over parts; empty list yields true."""
    if not parts:
        return Truth(True)
    out = parts[0]
    for q in parts[1:]:
        out = And(out, q)
    return out


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------


@dataclass
class Assign:
    var: str
    rhs: Expr


@dataclass
class Parallel:
    """Simultaneous parallel assignment; no assigns means skip."""

    assigns: list[Assign]

    @property
    def is_skip(self) -> bool:
        return not self.assigns

    def assigned_vars(self) -> list[str]:
        return [a.var for a in self.assigns]


Subst = Parallel


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------


@dataclass
class CarrierSetDecl:
    """Named abstract set; its cardinality comes from a Scope, never from
    the declaration."""

    name: str


@dataclass
class EventDef:
    """Guarded action.  Empty params is the SELECT form, nonempty the ANY
    form; each param's typing conjunct (its enumeration domain) is kept both
    in `params` and as a leading conjunct of `guard`."""

    name: str
    params: list[tuple[str, Expr]]
    guard: Pred
    action: Parallel


@dataclass
class AbstractSystem:
    name: str
    sets: list[CarrierSetDecl]
    constants: list[str]
    properties: Pred
    variables: list[str]
    invariant: Pred
    init: Parallel
    events: list[EventDef]
    # Filled by validation; deterministic, so it participates in equality.
    var_types: dict[str, Ty] = field(default_factory=dict)
    constant_types: dict[str, Ty] = field(default_factory=dict)

    def set_names(self) -> list[str]:
        return [s.name for s in self.sets]

    def event_names(self) -> list[str]:
        return [e.name for e in self.events]

    def event(self, name: str) -> EventDef:
        for e in self.events:
            if e.name == name:
                return e
        raise KeyError(name)
