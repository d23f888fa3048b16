"""Runtime values, scopes, states, and bindings.

Values are immutable and canonical by construction: finite sets keep their
element indices sorted, states keep variables in declaration order.  Two
states are equal exactly when their canonical renderings are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import ScopeError


@dataclass(frozen=True, order=True)
class Elem:
    """One element of a carrier set, rendered CARRIERindex (READER2)."""

    carrier: str
    index: int  # 1-based, <= scope cardinality

    def render(self) -> str:
        return f"{self.carrier}{self.index}"


class FinSet:
    """Finite subset of one carrier, held as a sorted tuple of indices.

    The carrier may be unknown (None) only while empty — the empty-set
    literal {} is polymorphic — so equality and hashing ignore the carrier
    when there are no elements.
    """

    __slots__ = ("carrier", "indices")

    def __init__(self, carrier: str | None, indices: Iterable[int] = ()):
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "indices", tuple(sorted(set(indices))))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("FinSet is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSet):
            return NotImplemented
        if self.indices != other.indices:
            return False
        return not self.indices or self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash(self.indices)

    def __repr__(self) -> str:
        return f"FinSet({self.carrier!r}, {self.indices!r})"

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, elem: Elem) -> bool:
        return elem.index in self.indices and elem.carrier == self.carrier

    def elements(self) -> list[Elem]:
        assert self.carrier is not None or not self.indices
        return [Elem(self.carrier or "?", i) for i in self.indices]

    def render(self) -> str:
        return "{" + ",".join(f"{self.carrier}{i}" for i in self.indices) + "}"


Value = Union[bool, int, Elem, FinSet]


def render_value(v: Value) -> str:
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Elem):
        return v.render()
    if isinstance(v, FinSet):
        return v.render()
    raise TypeError(f"not a value: {v!r}")


def value_to_json(v: Value) -> object:
    """JSON wire shape: naturals as numbers, elements as strings, sets as
    sorted string lists, booleans as booleans."""
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Elem):
        return v.render()
    if isinstance(v, FinSet):
        return [f"{v.carrier}{i}" for i in v.indices]
    raise TypeError(f"not a value: {v!r}")


@dataclass(frozen=True)
class Scope:
    """Finite instantiation: carrier cardinalities plus constant values."""

    set_cards: dict[str, int] = field(default_factory=dict)
    constant_values: dict[str, Value] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, card in self.set_cards.items():
            if card < 1:
                raise ScopeError(f"carrier {name!r} needs cardinality >= 1, got {card}")

    def card(self, carrier: str) -> int:
        try:
            return self.set_cards[carrier]
        except KeyError:
            raise ScopeError(f"scope gives no cardinality for carrier {carrier!r}")

    def full_set(self, carrier: str) -> FinSet:
        return FinSet(carrier, range(1, self.card(carrier) + 1))


# A binding maps an event's parameters, in declaration order, to values.
Binding = tuple[tuple[str, Value], ...]


def render_binding(b: Binding) -> str:
    if not b:
        return "-"
    return ",".join(f"{n}={render_value(v)}" for n, v in b)


@dataclass(frozen=True)
class SysState:
    """Total mapping from variable names to values, in declaration order."""

    names: tuple[str, ...]
    values: tuple[Value, ...]

    def get(self, name: str) -> Value:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise ScopeError(f"state has no variable {name!r}")

    def has(self, name: str) -> bool:
        return name in self.names

    def assign(self, updates: dict[str, Value]) -> "SysState":
        """Simultaneous update; unnamed variables are untouched."""
        new_values = tuple(
            updates.get(n, v) for n, v in zip(self.names, self.values)
        )
        return SysState(self.names, new_values)

    def canonical(self) -> str:
        return "; ".join(
            f"{n}={render_value(v)}" for n, v in zip(self.names, self.values)
        )

    def canonical_sorted(self) -> str:
        """Variable-order-independent rendering, for comparing states across
        systems that declare the same variables in different orders (e.g.
        the two orders of a parallel composition)."""
        return "; ".join(
            f"{n}={render_value(v)}"
            for n, v in sorted(zip(self.names, self.values))
        )

    def as_dict(self) -> dict[str, Value]:
        return dict(zip(self.names, self.values))
