"""Finite-scope semantics: expression/predicate evaluation, enabled-binding
enumeration, parallel substitution, and typed-state enumeration.

Everything here is pure and reentrant; values and states are immutable.
Callers resolve a scope once with :func:`resolve_constants` and pass the
resolved scope down.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .check import Env, expr_ty, names_in_expr, split_elem_literal
from .errors import (
    PropertyViolation,
    ScopeError,
    StateSpaceTooLarge,
    UnresolvedConstant,
    WellDefinednessError,
)
from .printer import render_expr, render_pred
from .syntax import (
    AbstractSystem,
    And,
    BinOp,
    Card,
    Compare,
    ElemTy,
    EventDef,
    Exists,
    Expr,
    Implies,
    Name,
    NatLit,
    NatTy,
    Not,
    Or,
    Pred,
    SetLit,
    SetTy,
    Truth,
    conjuncts,
)
from .values import Binding, Elem, FinSet, Scope, SysState, Value


# ---------------------------------------------------------------------------
# Scope resolution
# ---------------------------------------------------------------------------


def _is_ground(e: Expr, system: AbstractSystem) -> bool:
    """Ground = mentions no state variables (constants/carriers only)."""
    allowed = set(system.constants) | set(system.set_names())
    for n in names_in_expr(e, set()):
        if n == "NAT" or n in allowed:
            continue
        if split_elem_literal(n, set(system.set_names())):
            continue
        return False
    return True


def resolve_constants(system: AbstractSystem, scope: Scope) -> Scope:
    """Produce a scope in which every declared constant has a value.

    Values come from the scope file first; a PROPERTIES conjunct of the form
    `c = <ground expression>` supplies a default for constants the scope
    leaves out.  Every other ground PROPERTIES conjunct is then checked and
    must hold (a scope that contradicts the properties is rejected);
    overridden default equalities are exempt.
    """
    for carrier in system.set_names():
        scope.card(carrier)  # raises ScopeError when missing

    values: dict[str, Value] = {
        c: v for c, v in scope.constant_values.items() if c in system.constants
    }
    resolved = Scope(dict(scope.set_cards), values)
    default_conjs: list[tuple[Pred, str]] = []
    for conj in conjuncts(system.properties):
        if (
            isinstance(conj, Compare)
            and conj.op == "="
            and isinstance(conj.left, Name)
            and conj.left.name in system.constants
            and _is_ground(conj.right, system)
        ):
            default_conjs.append((conj, conj.left.name))
            if conj.left.name not in values:
                values[conj.left.name] = eval_expr(
                    conj.right, _EMPTY_STATE, (), resolved
                )
    missing = [c for c in system.constants if c not in values]
    if missing:
        raise UnresolvedConstant(
            f"no value for constant(s) {', '.join(missing)}: "
            "supply them in the scope or as a PROPERTIES equality"
        )
    resolved = Scope(dict(scope.set_cards), values)

    overridden = {c for c in scope.constant_values if c in system.constants}
    defaults = {id(conj) for conj, c in default_conjs}
    for conj in conjuncts(system.properties):
        if id(conj) in defaults:
            # Default equalities either defined the value (hold trivially)
            # or were overridden by the scope on purpose.
            continue
        if not eval_pred(conj, _EMPTY_STATE, (), resolved):
            raise PropertyViolation(
                f"property {render_pred(conj)!r} is false under the scope"
            )
    return resolved


_EMPTY_STATE = SysState((), ())


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _resolve_name(name: str, state: SysState, binding: Binding, scope: Scope) -> Value:
    for n, v in binding:
        if n == name:
            return v
    if state.has(name):
        return state.get(name)
    if name in scope.constant_values:
        return scope.constant_values[name]
    if name in scope.set_cards:
        return scope.full_set(name)
    lit = split_elem_literal(name, set(scope.set_cards))
    if lit:
        carrier, index = lit
        if index > scope.card(carrier):
            raise WellDefinednessError(
                f"element {name} is outside the scope (card({carrier})="
                f"{scope.card(carrier)})"
            )
        return Elem(carrier, index)
    raise UnresolvedConstant(f"no value for identifier {name!r}")


def eval_expr(e: Expr, state: SysState, binding: Binding, scope: Scope) -> Value:
    if isinstance(e, Name):
        return _resolve_name(e.name, state, binding, scope)
    if isinstance(e, NatLit):
        return e.value
    if isinstance(e, SetLit):
        if not e.items:
            return FinSet(None)
        elems = []
        for item in e.items:
            v = eval_expr(item, state, binding, scope)
            assert isinstance(v, Elem)
            elems.append(v)
        return FinSet(elems[0].carrier, (el.index for el in elems))
    if isinstance(e, Card):
        v = eval_expr(e.arg, state, binding, scope)
        assert isinstance(v, FinSet)
        return len(v)
    if isinstance(e, BinOp):
        lv = eval_expr(e.left, state, binding, scope)
        rv = eval_expr(e.right, state, binding, scope)
        if e.op == "+":
            assert isinstance(lv, int) and isinstance(rv, int)
            return lv + rv
        if e.op == "-" and isinstance(lv, int):
            assert isinstance(rv, int)
            if lv - rv < 0:
                raise WellDefinednessError(
                    f"natural subtraction below zero: "
                    f"{render_expr(e)} with {lv} - {rv}"
                )
            return lv - rv
        assert isinstance(lv, FinSet) and isinstance(rv, FinSet)
        carrier = lv.carrier if lv.carrier is not None else rv.carrier
        if e.op == "\\/":
            return FinSet(carrier, set(lv.indices) | set(rv.indices))
        if e.op == "/\\":
            return FinSet(carrier, set(lv.indices) & set(rv.indices))
        if e.op == "-":
            return FinSet(carrier, set(lv.indices) - set(rv.indices))
    raise ScopeError(f"cannot evaluate expression {e!r}")


def eval_pred(p: Pred, state: SysState, binding: Binding, scope: Scope) -> bool:
    """Classical two-valued evaluation, short-circuiting left to right."""
    if isinstance(p, Truth):
        return p.value
    if isinstance(p, Not):
        return not eval_pred(p.body, state, binding, scope)
    if isinstance(p, And):
        return eval_pred(p.left, state, binding, scope) and eval_pred(
            p.right, state, binding, scope
        )
    if isinstance(p, Or):
        return eval_pred(p.left, state, binding, scope) or eval_pred(
            p.right, state, binding, scope
        )
    if isinstance(p, Implies):
        return (not eval_pred(p.left, state, binding, scope)) or eval_pred(
            p.right, state, binding, scope
        )
    if isinstance(p, Exists):
        return any(
            eval_pred(p.body, state, b, scope)
            for b in enumerate_bindings(p.params, state, binding, scope)
        )
    if isinstance(p, Compare):
        return _eval_compare(p, state, binding, scope)
    raise ScopeError(f"cannot evaluate predicate {p!r}")


def _eval_compare(p: Compare, state: SysState, binding: Binding, scope: Scope) -> bool:
    if p.op in (":", "/:") and isinstance(p.right, Name) and p.right.name == "NAT":
        lv = eval_expr(p.left, state, binding, scope)
        assert isinstance(lv, int)
        return p.op == ":"  # naturals are the only numbers there are
    lv = eval_expr(p.left, state, binding, scope)
    rv = eval_expr(p.right, state, binding, scope)
    if p.op == ":":
        assert isinstance(lv, Elem) and isinstance(rv, FinSet)
        return lv in rv
    if p.op == "/:":
        assert isinstance(lv, Elem) and isinstance(rv, FinSet)
        return lv not in rv
    if p.op == "<:":
        assert isinstance(lv, FinSet) and isinstance(rv, FinSet)
        return set(lv.indices) <= set(rv.indices) and (
            not lv.indices or lv.carrier == rv.carrier
        )
    if p.op == "=":
        return lv == rv
    if p.op == "/=":
        return lv != rv
    assert isinstance(lv, int) and isinstance(rv, int)
    if p.op == "<=":
        return lv <= rv
    if p.op == "<":
        return lv < rv
    if p.op == ">=":
        return lv >= rv
    if p.op == ">":
        return lv > rv
    raise ScopeError(f"unknown comparison {p.op!r}")


# ---------------------------------------------------------------------------
# Bindings and events
# ---------------------------------------------------------------------------


def enumerate_bindings(
    params: list[tuple[str, Expr]],
    state: SysState,
    binding: Binding,
    scope: Scope,
) -> Iterator[Binding]:
    """All candidate bindings drawn from the typing domains, in canonical
    order: parameters in declaration order, carrier indices ascending.  A
    domain expression may mention earlier parameters; it is evaluated under
    the partial binding."""
    if not params:
        yield binding
        return
    (pname, domain), rest = params[0], params[1:]
    dv = eval_expr(domain, state, binding, scope)
    assert isinstance(dv, FinSet)
    for elem in dv.elements():
        yield from enumerate_bindings(rest, state, binding + ((pname, elem),), scope)


def enabled_bindings(ev: EventDef, state: SysState, scope: Scope) -> list[Binding]:
    """Exactly the bindings under which the full guard holds; [] means the
    event is disabled.  Typing conjuncts are enumerated first, so untyped
    candidates are never probed."""
    return [
        b
        for b in enumerate_bindings(ev.params, state, (), scope)
        if eval_pred(ev.guard, state, b, scope)
    ]


def apply_event(ev: EventDef, b: Binding, state: SysState, scope: Scope) -> SysState:
    """Fire ev under binding b: all right-hand sides evaluate in the
    pre-state, then assign simultaneously; unassigned variables keep their
    value."""
    updates = {
        a.var: eval_expr(a.rhs, state, b, scope) for a in ev.action.assigns
    }
    return state.assign(updates)


def initial_state(system: AbstractSystem, scope: Scope) -> SysState:
    """Execute the initialisation as one parallel substitution from the
    empty environment; the scope must already be resolved."""
    values: dict[str, Value] = {}
    for a in system.init.assigns:
        values[a.var] = eval_expr(a.rhs, _EMPTY_STATE, (), scope)
    return SysState(tuple(system.variables), tuple(values[v] for v in system.variables))


def all_options(
    system: AbstractSystem, state: SysState, scope: Scope
) -> list[tuple[str, Binding]]:
    """Every enabled (event, binding) pair, events in declaration order."""
    out: list[tuple[str, Binding]] = []
    for ev in system.events:
        for b in enabled_bindings(ev, state, scope):
            out.append((ev.name, b))
    return out


# ---------------------------------------------------------------------------
# Typed-state enumeration (for bounded PO discharge and CBC)
# ---------------------------------------------------------------------------


def nat_bound(system: AbstractSystem, scope: Scope, var: str) -> int:
    """Derive an inclusive upper bound for a NAT variable from the invariant.

    Recognised, first match wins:
      * `v = card(E)`   -> cardinality of E's carrier under the scope
      * `v = G`, `v <= G`, `v < G` for ground G (constants/carriers only)
    """
    env = Env(
        set(system.set_names()),
        {**system.constant_types, **system.var_types},
        "invariant",
    )
    for conj in conjuncts(system.invariant):
        if not isinstance(conj, Compare):
            continue
        left, right = conj.left, conj.right
        if isinstance(right, Name) and right.name == var and conj.op == "=":
            left, right = right, left  # normalise: variable on the left
        if not (isinstance(left, Name) and left.name == var):
            continue
        if conj.op == "=" and isinstance(right, Card):
            t = expr_ty(right.arg, env)
            assert isinstance(t, SetTy) and t.carrier is not None
            return scope.card(t.carrier)
        if conj.op in ("=", "<=", "<") and _is_ground(right, system):
            v = eval_expr(right, _EMPTY_STATE, (), scope)
            assert isinstance(v, int)
            return v if conj.op != "<" else v - 1
    raise StateSpaceTooLarge(
        f"cannot bound natural variable {var!r} for finite enumeration; "
        "add an invariant conjunct like `"
        f"{var} <= <constant>` or `{var} = card(<set>)`"
    )


def _var_domain(system: AbstractSystem, scope: Scope, var: str) -> list[Value]:
    ty = system.var_types[var]
    if isinstance(ty, SetTy):
        assert ty.carrier is not None
        n = scope.card(ty.carrier)
        return [
            FinSet(ty.carrier, (i + 1 for i in range(n) if mask >> i & 1))
            for mask in range(1 << n)
        ]
    if isinstance(ty, ElemTy):
        return [Elem(ty.carrier, i) for i in range(1, scope.card(ty.carrier) + 1)]
    assert isinstance(ty, NatTy)
    return list(range(nat_bound(system, scope, var) + 1))


def typed_state_count(system: AbstractSystem, scope: Scope) -> int:
    """Number of well-typed states, computed without materialising them."""
    count = 1
    for var in system.variables:
        ty = system.var_types[var]
        if isinstance(ty, SetTy):
            assert ty.carrier is not None
            count *= 1 << scope.card(ty.carrier)
        elif isinstance(ty, ElemTy):
            count *= scope.card(ty.carrier)
        else:
            count *= max(nat_bound(system, scope, var) + 1, 0)
    return count


def typed_state_space(system: AbstractSystem, scope: Scope) -> Iterator[SysState]:
    """All well-typed states in a fixed deterministic order (variables in
    declaration order, last variable varying fastest)."""
    names = tuple(system.variables)
    domains = [_var_domain(system, scope, v) for v in system.variables]
    for combo in itertools.product(*domains):
        yield SysState(names, combo)
