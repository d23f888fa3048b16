"""Pretty-printer; inverse of the parser up to whitespace.

parse_system(render_system(s)) is structurally identical to s.  Parentheses
are emitted exactly where the operator precedences require them, so nested
tree shapes survive the round trip.
"""

from __future__ import annotations

from .syntax import (
    AbstractSystem,
    And,
    BinOp,
    Card,
    Compare,
    EventDef,
    Exists,
    Expr,
    Implies,
    Name,
    NatLit,
    Not,
    Or,
    Parallel,
    Pred,
    SetLit,
    Truth,
)

# Expression precedence: union < intersection < additive < primary.
_EXPR_PREC = {"\\/": 1, "/\\": 2, "+": 3, "-": 3}
# Predicate precedence: implication < disjunction < conjunction < atom.
_PRED_PREC = {"=>": 1, "or": 2, "&": 3}


def render_expr(e: Expr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(e, Name):
        return e.name
    if isinstance(e, NatLit):
        return str(e.value)
    if isinstance(e, SetLit):
        return "{" + ", ".join(render_expr(i) for i in e.items) + "}"
    if isinstance(e, Card):
        return f"card({render_expr(e.arg)})"
    if isinstance(e, BinOp):
        prec = _EXPR_PREC[e.op]
        text = (
            f"{render_expr(e.left, prec, False)} {e.op} "
            f"{render_expr(e.right, prec, True)}"
        )
        # All expression operators are left-associative.
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    raise TypeError(f"cannot render {e!r}")


def render_pred(p: Pred, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(p, Truth):
        return "true" if p.value else "false"
    if isinstance(p, Compare):
        return f"{render_expr(p.left)} {p.op} {render_expr(p.right)}"
    if isinstance(p, Not):
        return f"not({render_pred(p.body)})"
    if isinstance(p, Exists):
        names = ", ".join(n for n, _ in p.params)
        return f"#({names}).({render_pred(p.body)})"
    if isinstance(p, (And, Or, Implies)):
        op = "&" if isinstance(p, And) else "or" if isinstance(p, Or) else "=>"
        prec = _PRED_PREC[op]
        if isinstance(p, Implies):
            # Right-associative.
            text = (
                f"{render_pred(p.left, prec, True)} {op} "
                f"{render_pred(p.right, prec, False)}"
            )
        else:
            text = (
                f"{render_pred(p.left, prec, False)} {op} "
                f"{render_pred(p.right, prec, True)}"
            )
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    raise TypeError(f"cannot render {p!r}")


def render_subst(s: Parallel) -> str:
    if s.is_skip:
        return "skip"
    return " || ".join(f"{a.var} := {render_expr(a.rhs)}" for a in s.assigns)


def _left_spine(p: Pred) -> list[Pred]:
    """Split the left-associative & chain the parser builds. Unlike a full
    flatten, a right-nested And stays one element (and gets parenthesised),
    so arbitrary tree shapes round-trip."""
    parts: list[Pred] = []
    while isinstance(p, And):
        parts.append(p.right)
        p = p.left
    parts.append(p)
    parts.reverse()
    return parts


def _block_pred(p: Pred, indent: str) -> str:
    parts = _left_spine(p)
    lines = [f"{indent}  {render_pred(parts[0], _PRED_PREC['&'], False)}"]
    for part in parts[1:]:
        lines.append(f"{indent}& {render_pred(part, _PRED_PREC['&'], True)}")
    return "\n".join(lines)


def _block_subst(s: Parallel, indent: str) -> str:
    if s.is_skip:
        return f"{indent}  skip"
    lines = [f"{indent}   {s.assigns[0].var} := {render_expr(s.assigns[0].rhs)}"]
    for a in s.assigns[1:]:
        lines.append(f"{indent}|| {a.var} := {render_expr(a.rhs)}")
    return "\n".join(lines)


def _render_event(ev: EventDef) -> str:
    lines = [f"  {ev.name} ="]
    if ev.params:
        names = ", ".join(n for n, _ in ev.params)
        lines.append(f"    ANY {names} WHERE")
        lines.append(_block_pred(ev.guard, "      "))
        lines.append("    THEN")
    else:
        lines.append("    SELECT")
        lines.append(_block_pred(ev.guard, "      "))
        lines.append("    THEN")
    lines.append(_block_subst(ev.action, "      "))
    lines.append("    END")
    return "\n".join(lines)


def render_system(system: AbstractSystem) -> str:
    """Render a validated system back to .mbs source."""
    lines = [f"SYSTEM {system.name}"]
    if system.sets:
        lines.append("SETS " + "; ".join(s.name for s in system.sets))
    if system.constants:
        lines.append("CONSTANTS " + ", ".join(system.constants))
    if not isinstance(system.properties, Truth) or not system.properties.value:
        lines.append("PROPERTIES")
        lines.append(_block_pred(system.properties, "  "))
    if system.variables:
        lines.append("VARIABLES " + ", ".join(system.variables))
    lines.append("INVARIANT")
    lines.append(_block_pred(system.invariant, "  "))
    lines.append("INITIALISATION")
    lines.append(_block_subst(system.init, "  "))
    lines.append("EVENTS")
    body = ";\n".join(_render_event(ev) for ev in system.events)
    if body:
        lines.append(body)
    lines.append("END")
    return "\n".join(lines) + "\n"
