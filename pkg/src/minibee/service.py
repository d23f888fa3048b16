"""HTTP+JSON session service: the transport behind the interactive
animator UI.

Endpoints (all JSON fields lower_snake_case):
    POST /sessions                {spec_id | source, scope}
    GET  /sessions/{id}/state     canonical state + invariant conjunct values
    GET  /sessions/{id}/options   enabled (event, binding) pairs + disabled reasons
    POST /sessions/{id}/fire      {event, binding} -> new state, 409 when stale
    POST /sessions/{id}/undo      409 when there is no history
    GET  /sessions/{id}/graph     DOT over the visited states
    GET  /specs                   bundled corpus listing

Sessions are in-memory and single-owner: mutations on one session are
serialized; responses are pure functions of session state.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import corpus as corpus_pkg
from .animator import Session, fire, new_session, reduced_view, step_options, undo
from .errors import EmptyHistory, IllegalChoice, MinibeeError
from .explorer import explain_disabled
from .parser import parse_system
from .values import render_binding, render_value, value_to_json


class CreateSession(BaseModel):
    spec_id: str | None = None
    source: str | None = None
    scope: dict = {}


class FireRequest(BaseModel):
    event: str
    binding: dict[str, str | int] = {}


@dataclass
class _Slot:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)


def _state_payload(sess: Session) -> dict:
    return {
        "rendered": sess.current.canonical(),
        "variables": {
            n: value_to_json(v) for n, v in sess.current.as_dict().items()
        },
        "invariant": [
            {"index": i + 1, "text": text, "value": value}
            for i, (text, value) in enumerate(sess.invariant_conjunct_values())
        ],
    }


def _binding_wire(binding) -> dict:
    return {name: value_to_json(value) for name, value in binding}


def _options_payload(sess: Session) -> dict:
    options = [
        {
            "event": event,
            "binding": _binding_wire(binding),
            "label": f"{event}({render_binding(binding)})"
            if binding
            else f"{event}()",
        }
        for event, binding in step_options(sess)
    ]
    disabled = [
        {
            "event": r.event,
            "conjunct_index": r.conjunct_index,
            "conjunct": r.conjunct,
            "binding": render_binding(r.binding) if r.binding else None,
            "note": r.note,
        }
        for r in explain_disabled(sess.system, sess.current, sess.scope)
    ]
    return {"options": options, "disabled": disabled}


def create_app() -> FastAPI:
    app = FastAPI(title="minibee session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    slots: dict[str, _Slot] = {}

    def slot_of(session_id: str) -> _Slot:
        slot = slots.get(session_id)
        if slot is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return slot

    @app.get("/specs")
    def list_specs() -> dict:
        entries = [
            {
                "id": e.id,
                "role": e.role,
                "description": e.description,
                "events": e.system.event_names(),
                "expected": e.expected,
            }
            for e in corpus_pkg.load_corpus()
        ]
        return {"specs": entries, "default_scope": "desk"}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSession) -> dict:
        if (req.spec_id is None) == (req.source is None):
            raise HTTPException(
                status_code=422, detail="give exactly one of spec_id or source"
            )
        try:
            if req.spec_id is not None:
                system = corpus_pkg.load_entry(req.spec_id).system
            else:
                system = parse_system(req.source or "")
            scope = (
                corpus_pkg.desk_scope()
                if not req.scope
                else corpus_pkg.scope_from_json(req.scope)
            )
            sess = new_session(system, scope)
        except MinibeeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex
        slots[session_id] = _Slot(sess)
        return {
            "session_id": session_id,
            "system": system.name,
            "state": _state_payload(sess),
        }

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict:
        return _state_payload(slot_of(session_id).session)

    @app.get("/sessions/{session_id}/options")
    def get_options(session_id: str) -> dict:
        return _options_payload(slot_of(session_id).session)

    @app.post("/sessions/{session_id}/fire")
    def post_fire(session_id: str, req: FireRequest) -> dict:
        slot = slot_of(session_id)
        with slot.lock:
            sess = slot.session
            wanted = {k: str(v) for k, v in req.binding.items()}
            choice = None
            for event, binding in step_options(sess):
                wire = {k: str(render_value(v)) for k, v in binding}
                if event == req.event and wire == wanted:
                    choice = (event, binding)
                    break
            if choice is None:
                raise HTTPException(
                    status_code=409,
                    detail=f"{req.event} with binding {wanted} is not enabled",
                )
            try:
                fire(sess, choice)
            except IllegalChoice as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            return {"state": _state_payload(sess), **_options_payload(sess)}

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str) -> dict:
        slot = slot_of(session_id)
        with slot.lock:
            try:
                undo(slot.session)
            except EmptyHistory as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            return {"state": _state_payload(slot.session), **_options_payload(slot.session)}

    @app.get("/sessions/{session_id}/graph", response_class=PlainTextResponse)
    def get_graph(session_id: str) -> str:
        sess = slot_of(session_id).session
        return reduced_view(sess.system, sess.scope, sess.visited, sess.edges)

    return app
