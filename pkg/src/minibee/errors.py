"""Exception hierarchy for the workbench.

Every failure surfaced to a caller is a subclass of :class:`MinibeeError`,
so CLI and service layers can map "input/spec problems" uniformly.
"""

from __future__ import annotations


class MinibeeError(Exception):
    """Base class for all workbench errors."""


class SpecSyntaxError(MinibeeError):
    """Malformed concrete syntax; carries position and what was expected."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class ScopeError(MinibeeError):
    """Reference to an identifier that is not declared anywhere."""


class SpecTypeError(MinibeeError):
    """Ill-typed expression, predicate, or substitution."""


class DuplicateError(MinibeeError):
    """A name is declared or assigned twice where uniqueness is required."""


class InitError(MinibeeError):
    """Initialisation misses a variable or assigns one twice."""


class WellDefinednessError(MinibeeError):
    """Evaluation hit a partial operation (natural subtraction below zero,
    carrier element outside the scope)."""


class UnresolvedConstant(ScopeError):
    """A constant has no value from the scope nor a default equality."""


class PropertyViolation(MinibeeError):
    """A ground PROPERTIES conjunct is false under the resolved constants."""


class EventClash(MinibeeError):
    """Parallel composition found the same event name on both sides."""


class SharedInitConflict(MinibeeError):
    """A shared variable is initialised differently by the two systems."""


class TypeClash(MinibeeError):
    """A shared variable or set is declared with two different types."""


class StateSpaceTooLarge(MinibeeError):
    """The typed state space exceeds the configured ceiling (or cannot be
    bounded at all); shrink the scope."""


class AlphabetError(MinibeeError):
    """An abstract event name does not occur in the refined system."""


class IllegalChoice(MinibeeError):
    """A fire request named an (event, binding) pair that is not currently
    enabled; the client view is stale."""


class EmptyHistory(MinibeeError):
    """Undo requested on a session with no fired steps."""


class CorpusCorrupt(MinibeeError):
    """A bundled corpus entry fails to parse or validate."""
