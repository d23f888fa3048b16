"""Static validation: scoping, typing, and well-formedness of a parsed system.

Typing discipline:
  * every variable must be typed by a top-level invariant conjunct of the
    form `v : NAT`, `v : CARRIER`, or `v <: CARRIER` (first one wins);
  * every ANY parameter must be typed by the leading guard conjuncts, in
    declaration order: the k-th conjunct must read `p_k : <set expression>`,
    and that expression doubles as the parameter's enumeration domain;
  * constants default to NAT unless a PROPERTIES conjunct types them.

A name of the form CARRIERi (e.g. READER2, for a declared carrier set) is a
carrier-element literal.
"""

from __future__ import annotations

import re

from .errors import DuplicateError, InitError, ScopeError, SpecTypeError
from .syntax import (
    AbstractSystem,
    And,
    Assign,
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
    Parallel,
    Pred,
    SetLit,
    SetTy,
    Truth,
    Ty,
    conjuncts,
)

NAT = NatTy()

_ELEM_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*?)([0-9]+)$")


class Env:
    """Name environment for one checking context."""

    def __init__(
        self,
        carriers: set[str],
        names: dict[str, Ty],
        where: str,
    ):
        self.carriers = carriers
        self.names = names
        self.where = where

    def with_params(self, params: dict[str, Ty], where: str) -> "Env":
        merged = dict(self.names)
        merged.update(params)
        return Env(self.carriers, merged, where)

    def resolve(self, name: str) -> Ty:
        if name in self.names:
            return self.names[name]
        if name in self.carriers:
            return SetTy(name)
        m = _ELEM_RE.match(name)
        if m and m.group(1) in self.carriers:
            if int(m.group(2)) < 1:
                raise ScopeError(
                    f"{self.where}: element {name!r} is invalid (indices start at 1)"
                )
            return ElemTy(m.group(1))
        raise ScopeError(f"{self.where}: undeclared identifier {name!r}")


def split_elem_literal(name: str, carriers: set[str]) -> tuple[str, int] | None:
    """Return (carrier, index) when name reads as a carrier-element literal."""
    m = _ELEM_RE.match(name)
    if m and m.group(1) in carriers and int(m.group(2)) >= 1:
        return m.group(1), int(m.group(2))
    return None


def _merge_set(a: SetTy, b: SetTy, where: str) -> SetTy:
    if a.carrier is None:
        return b
    if b.carrier is None or a.carrier == b.carrier:
        return a
    raise SpecTypeError(
        f"{where}: mixing sets over {a.carrier} and {b.carrier}"
    )


def expr_ty(e: Expr, env: Env) -> Ty:
    if isinstance(e, Name):
        if e.name == "NAT":
            raise SpecTypeError(
                f"{env.where}: NAT may only appear to the right of ':' or '/:'"
            )
        return env.resolve(e.name)
    if isinstance(e, NatLit):
        return NAT
    if isinstance(e, SetLit):
        carrier: str | None = None
        for item in e.items:
            t = expr_ty(item, env)
            if not isinstance(t, ElemTy):
                raise SpecTypeError(
                    f"{env.where}: set literal members must be carrier elements"
                )
            if carrier is not None and carrier != t.carrier:
                raise SpecTypeError(
                    f"{env.where}: set literal mixes {carrier} and {t.carrier}"
                )
            carrier = t.carrier
        return SetTy(carrier)
    if isinstance(e, Card):
        t = expr_ty(e.arg, env)
        if not isinstance(t, SetTy):
            raise SpecTypeError(f"{env.where}: card(...) applies only to sets")
        return NAT
    if isinstance(e, BinOp):
        lt = expr_ty(e.left, env)
        rt = expr_ty(e.right, env)
        if e.op == "+":
            if lt == NAT and rt == NAT:
                return NAT
            raise SpecTypeError(f"{env.where}: '+' needs natural operands")
        if e.op in ("\\/", "/\\"):
            if isinstance(lt, SetTy) and isinstance(rt, SetTy):
                return _merge_set(lt, rt, env.where)
            raise SpecTypeError(f"{env.where}: {e.op!r} needs set operands")
        if e.op == "-":
            if lt == NAT and rt == NAT:
                return NAT
            if isinstance(lt, SetTy) and isinstance(rt, SetTy):
                return _merge_set(lt, rt, env.where)
            raise SpecTypeError(
                f"{env.where}: '-' needs two sets or two naturals"
            )
    raise SpecTypeError(f"{env.where}: unsupported expression {e!r}")


def check_pred(p: Pred, env: Env) -> None:
    if isinstance(p, Truth):
        return
    if isinstance(p, Not):
        check_pred(p.body, env)
        return
    if isinstance(p, (And, Or, Implies)):
        check_pred(p.left, env)
        check_pred(p.right, env)
        return
    if isinstance(p, Exists):
        params: dict[str, Ty] = {}
        for pname, domain in p.params:
            t = expr_ty(domain, env.with_params(params, env.where))
            if not isinstance(t, SetTy) or t.carrier is None:
                raise SpecTypeError(
                    f"{env.where}: bound variable {pname!r} needs a carrier-set domain"
                )
            params[pname] = ElemTy(t.carrier)
        check_pred(p.body, env.with_params(params, env.where))
        return
    if isinstance(p, Compare):
        _check_compare(p, env)
        return
    raise SpecTypeError(f"{env.where}: unsupported predicate {p!r}")


def _check_compare(p: Compare, env: Env) -> None:
    if p.op in (":", "/:"):
        if isinstance(p.right, Name) and p.right.name == "NAT":
            lt = expr_ty(p.left, env)
            if lt != NAT:
                raise SpecTypeError(f"{env.where}: ': NAT' needs a natural")
            return
        rt = expr_ty(p.right, env)
        lt = expr_ty(p.left, env)
        if not isinstance(rt, SetTy):
            raise SpecTypeError(f"{env.where}: {p.op!r} needs a set on the right")
        if not isinstance(lt, ElemTy):
            raise SpecTypeError(
                f"{env.where}: {p.op!r} needs a carrier element on the left"
            )
        if rt.carrier is not None and rt.carrier != lt.carrier:
            raise SpecTypeError(
                f"{env.where}: membership mixes {lt.carrier} and {rt.carrier}"
            )
        return
    lt = expr_ty(p.left, env)
    rt = expr_ty(p.right, env)
    if p.op == "<:":
        if isinstance(lt, SetTy) and isinstance(rt, SetTy):
            _merge_set(lt, rt, env.where)
            return
        raise SpecTypeError(f"{env.where}: '<:' needs set operands")
    if p.op in ("=", "/="):
        if lt == NAT and rt == NAT:
            return
        if isinstance(lt, ElemTy) and lt == rt:
            return
        if isinstance(lt, SetTy) and isinstance(rt, SetTy):
            _merge_set(lt, rt, env.where)
            return
        raise SpecTypeError(
            f"{env.where}: '=' compares values of different types ({lt} vs {rt})"
        )
    if p.op in ("<=", "<", ">=", ">"):
        if lt == NAT and rt == NAT:
            return
        raise SpecTypeError(f"{env.where}: {p.op!r} needs natural operands")
    raise SpecTypeError(f"{env.where}: unknown comparison {p.op!r}")


def names_in_expr(e: Expr, out: set[str]) -> set[str]:
    if isinstance(e, Name):
        out.add(e.name)
    elif isinstance(e, SetLit):
        for item in e.items:
            names_in_expr(item, out)
    elif isinstance(e, Card):
        names_in_expr(e.arg, out)
    elif isinstance(e, BinOp):
        names_in_expr(e.left, out)
        names_in_expr(e.right, out)
    return out


# ---------------------------------------------------------------------------
# System validation
# ---------------------------------------------------------------------------


def _typing_conjunct(c: Pred, carriers: set[str]) -> tuple[str, Ty] | None:
    """Recognise `v : NAT`, `v : CARRIER`, `v <: CARRIER`."""
    if not isinstance(c, Compare) or not isinstance(c.left, Name):
        return None
    if not isinstance(c.right, Name):
        return None
    v, rhs = c.left.name, c.right.name
    if c.op == ":" and rhs == "NAT":
        return v, NAT
    if c.op == ":" and rhs in carriers:
        return v, ElemTy(rhs)
    if c.op == "<:" and rhs in carriers:
        return v, SetTy(rhs)
    return None


def validate_system(system: AbstractSystem) -> AbstractSystem:
    """Check scoping, typing, and init coverage; fill var/constant types.

    Mutates `system` in place (types, parameter domains) and returns it.
    """
    carriers: set[str] = set()
    for decl in system.sets:
        if decl.name in carriers:
            raise DuplicateError(f"carrier set {decl.name!r} declared twice")
        carriers.add(decl.name)

    taken: dict[str, str] = {c: "carrier set" for c in carriers}
    for c in system.constants:
        if c in taken:
            raise DuplicateError(f"constant {c!r} collides with a {taken[c]}")
        taken[c] = "constant"
    for v in system.variables:
        if v in taken:
            raise DuplicateError(f"variable {v!r} collides with a {taken[v]}")
        taken[v] = "variable"
    seen_events: set[str] = set()
    for ev in system.events:
        if ev.name in seen_events:
            raise DuplicateError(f"event {ev.name!r} declared twice")
        seen_events.add(ev.name)

    # Constant types from PROPERTIES typing conjuncts; NAT by default.
    constant_types: dict[str, Ty] = {c: NAT for c in system.constants}
    for conj in conjuncts(system.properties):
        found = _typing_conjunct(conj, carriers)
        if found and found[0] in constant_types:
            constant_types[found[0]] = found[1]
    system.constant_types = constant_types

    const_env = Env(carriers, dict(constant_types), "PROPERTIES")
    check_pred(system.properties, const_env)

    # Variable types from invariant typing conjuncts.
    var_types: dict[str, Ty] = {}
    for conj in conjuncts(system.invariant):
        found = _typing_conjunct(conj, carriers)
        if found and found[0] in system.variables and found[0] not in var_types:
            var_types[found[0]] = found[1]
    for v in system.variables:
        if v not in var_types:
            raise SpecTypeError(
                f"variable {v!r} has no typing conjunct "
                "(v : NAT, v : CARRIER, or v <: CARRIER) in the invariant"
            )
    system.var_types = var_types

    state_names: dict[str, Ty] = dict(constant_types)
    state_names.update(var_types)
    inv_env = Env(carriers, state_names, "INVARIANT")
    check_pred(system.invariant, inv_env)

    _check_init(system, carriers, constant_types)
    for ev in system.events:
        _check_event(ev, system, carriers, state_names)
    return system


def _check_init(
    system: AbstractSystem, carriers: set[str], constant_types: dict[str, Ty]
) -> None:
    env = Env(carriers, dict(constant_types), "INITIALISATION")
    assigned: set[str] = set()
    for a in system.init.assigns:
        if a.var not in system.var_types:
            raise InitError(f"INITIALISATION assigns undeclared variable {a.var!r}")
        if a.var in assigned:
            raise InitError(f"INITIALISATION assigns {a.var!r} twice")
        assigned.add(a.var)
        # The right-hand side runs in the empty state: variables are not
        # visible, only constants and carriers.
        rt = expr_ty(a.rhs, env)
        _check_assignable(a.var, system.var_types[a.var], rt, "INITIALISATION")
    missing = [v for v in system.variables if v not in assigned]
    if missing:
        raise InitError(
            f"INITIALISATION leaves {', '.join(repr(v) for v in missing)} unassigned"
        )


def _check_assignable(var: str, vt: Ty, rt: Ty, where: str) -> None:
    if isinstance(vt, SetTy) and isinstance(rt, SetTy):
        _merge_set(vt, rt, where)
        return
    if vt == rt:
        return
    raise SpecTypeError(f"{where}: cannot assign {rt} to {var!r} ({vt})")


def _check_event(
    ev: EventDef,
    system: AbstractSystem,
    carriers: set[str],
    state_names: dict[str, Ty],
) -> None:
    where = f"event {ev.name}"
    guard_conjs = conjuncts(ev.guard)
    param_types: dict[str, Ty] = {}
    typed_params: list[tuple[str, Expr]] = []
    for k, (pname, _) in enumerate(ev.params):
        if pname in state_names or pname in carriers:
            raise DuplicateError(f"{where}: parameter {pname!r} shadows a declaration")
        if pname in param_types:
            raise DuplicateError(f"{where}: parameter {pname!r} repeated")
        if k >= len(guard_conjs):
            raise SpecTypeError(
                f"{where}: parameter {pname!r} has no typing guard conjunct"
            )
        conj = guard_conjs[k]
        if (
            not isinstance(conj, Compare)
            or conj.op != ":"
            or not isinstance(conj.left, Name)
            or conj.left.name != pname
        ):
            raise SpecTypeError(
                f"{where}: guard conjunct {k + 1} must type parameter {pname!r} "
                f"as '{pname} : <set expression>'"
            )
        domain = conj.right
        if isinstance(domain, Name) and domain.name == "NAT":
            raise SpecTypeError(
                f"{where}: parameter {pname!r} ranges over NAT, "
                "which cannot be enumerated; use a carrier-set domain"
            )
        # The domain may mention earlier parameters only.
        env_k = Env(carriers, dict(state_names), where).with_params(
            param_types, where
        )
        dt = expr_ty(domain, env_k)
        if not isinstance(dt, SetTy) or dt.carrier is None:
            raise SpecTypeError(
                f"{where}: domain of parameter {pname!r} must be a carrier set"
            )
        param_types[pname] = ElemTy(dt.carrier)
        typed_params.append((pname, domain))
    ev.params = typed_params

    full_env = Env(carriers, dict(state_names), where).with_params(param_types, where)
    check_pred(ev.guard, full_env)

    assigned: set[str] = set()
    for a in ev.action.assigns:
        if a.var in param_types:
            raise SpecTypeError(f"{where}: cannot assign to parameter {a.var!r}")
        if a.var not in system.var_types:
            raise ScopeError(f"{where}: assignment to undeclared variable {a.var!r}")
        if a.var in assigned:
            raise DuplicateError(f"{where}: {a.var!r} assigned twice in one action")
        assigned.add(a.var)
        rt = expr_ty(a.rhs, full_env)
        _check_assignable(a.var, system.var_types[a.var], rt, where)
