from __future__ import annotations

import pytest

from minibee.corpus import desk_scope, load_corpus
from minibee.parser import parse_system
from minibee.values import Scope

TOGGLE_SRC = """
SYSTEM Toggle
VARIABLES b
INVARIANT
    b : NAT
  & b <= 1
INITIALISATION
    b := 0
EVENTS
  on  = SELECT b = 0 THEN b := 1 END;
  off = SELECT b = 1 THEN b := 0 END
END
"""

MINIMAL_SRC = """
SYSTEM Empty
VARIABLES x
INVARIANT x : NAT
INITIALISATION x := 0
EVENTS
END
"""


@pytest.fixture(scope="session")
def corpus():
    return {entry.id: entry for entry in load_corpus()}


@pytest.fixture(scope="session")
def desk():
    return desk_scope()


@pytest.fixture(scope="session")
def scope21():
    return Scope({"READER": 2, "WRITER": 1})


@pytest.fixture()
def toggle():
    return parse_system(TOGGLE_SRC)


@pytest.fixture()
def minimal():
    return parse_system(MINIMAL_SRC)
