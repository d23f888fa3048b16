"""Bundled readers/writers corpus: spec files plus expected findings.

Entries load lazily from package data; every file must parse and validate,
otherwise the corpus is corrupt.  The desk scope (READER=2, WRITER=1,
maxConsecutiveR=2) is the smallest scope at which the buggy refinement
deadlocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..errors import CorpusCorrupt, MinibeeError
from ..parser import parse_system
from ..syntax import AbstractSystem
from ..values import Scope


@dataclass
class CorpusEntry:
    id: str
    file: str
    role: str  # abstract | refined | buggy | mutant
    description: str
    expected: dict
    source: str
    system: AbstractSystem
    composed_of: list[str]
    refines: str | None


def _data_root():
    return resources.files(__package__)


def read_text(name: str) -> str:
    return (_data_root() / name).read_text(encoding="utf-8")


def desk_scope() -> Scope:
    return scope_from_json(json.loads(read_text("desk.scope")))


def scope_from_json(data: dict) -> Scope:
    return Scope(
        set_cards=dict(data.get("sets", {})),
        constant_values=dict(data.get("constants", {})),
    )


def load_corpus() -> list[CorpusEntry]:
    """Parse and validate every bundled entry; CorpusCorrupt on any defect."""
    try:
        manifest = json.loads(read_text("manifest.json"))
    except (OSError, ValueError) as exc:
        raise CorpusCorrupt(f"manifest unreadable: {exc}") from exc
    entries = []
    for raw in manifest["entries"]:
        try:
            source = read_text(raw["file"])
            system = parse_system(source)
        except (OSError, MinibeeError) as exc:
            raise CorpusCorrupt(f"entry {raw.get('id')!r}: {exc}") from exc
        entries.append(
            CorpusEntry(
                id=raw["id"],
                file=raw["file"],
                role=raw["role"],
                description=raw.get("description", ""),
                expected=raw.get("expected", {}),
                source=source,
                system=system,
                composed_of=raw.get("composed_of", []),
                refines=raw.get("refines"),
            )
        )
    return entries


def load_entry(entry_id: str) -> CorpusEntry:
    for entry in load_corpus():
        if entry.id == entry_id:
            return entry
    raise CorpusCorrupt(f"no corpus entry named {entry_id!r}")
