"""Session-oriented HTTP API over the recommendation engine.

Clients upload a CSV to open a session, then drive it through mapping,
type-override, filter and bookmark endpoints. Every mutating call returns a
coherent snapshot: the channel map, the derived main chart and the
question-grouped recommendations all come from the same state version, and
a failed update leaves the session exactly as it was.

Configuration comes from environment variables (see :class:`ServiceConfig`)
or the ``vizrec serve`` command-line flags.
"""

from __future__ import annotations

import os
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import emitter
from .dataset import Dataset, VarType, load_csv, override_type
from .encoding import (
    Channel,
    ChannelMap,
    FieldRef,
    FilterClause,
    MarkType,
    _check_field,
    assign,
    build_spec,
    channel_map,
    clear,
    validate_map,
)
from .errors import (
    FilterError,
    InvalidFieldError,
    NoMappingError,
    ParseError,
    UnknownVariableError,
    VizrecError,
)
from .recommender import BookmarkStore, enumerate_groups

SELECTION_TOO_LARGE = "selection too large for question recommendations"


@dataclass
class ServiceConfig:
    session_ttl: float = 7200.0
    upload_limit: int = 20 * 1024 * 1024
    schema_version: str = emitter.DEFAULT_SCHEMA_VERSION

    @staticmethod
    def from_env() -> ServiceConfig:
        return ServiceConfig(
            session_ttl=float(os.environ.get("VIZREC_SESSION_TTL", 7200)),
            upload_limit=int(os.environ.get("VIZREC_UPLOAD_LIMIT", 20 * 1024 * 1024)),
            schema_version=os.environ.get("VIZREC_SCHEMA_VERSION", "v5"),
        )


@dataclass
class Session:
    id: str
    dataset: Dataset
    created_at: float
    expires_at: float
    channel_map: ChannelMap = field(default_factory=ChannelMap)
    filters: tuple[FilterClause, ...] = ()
    bookmarks: BookmarkStore = field(default_factory=BookmarkStore)
    lock: threading.RLock = field(default_factory=threading.RLock)


class SessionExpired(VizrecError):
    code = "session_expired"


class SessionNotFound(VizrecError):
    code = "session_not_found"


class SessionStore:
    def __init__(self, ttl: float) -> None:
        self._ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, dataset: Dataset) -> Session:
        now = time.time()
        session = Session(
            id=secrets.token_hex(12),
            dataset=dataset,
            created_at=now,
            expires_at=now + self._ttl,
        )
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise SessionNotFound(f"no session {session_id}", session=session_id)
            if time.time() > session.expires_at:
                del self._sessions[session_id]
                raise SessionExpired(f"session {session_id} expired", session=session_id)
            return session


_STATUS = {
    "parse_error": 400,
    "unknown_variable": 400,
    "channel_unavailable": 400,
    "invalid_field": 400,
    "no_mapping": 404,
    "unsupported_selection": 400,
    "dangling_field": 400,
    "invalid_filter": 400,
    "session_not_found": 404,
    "session_expired": 410,
    "payload_too_large": 413,
    "invalid_spec": 400,
    "not_found": 404,
    "bad_request": 400,
}


class RequestError(VizrecError):
    """Errors raised directly by endpoint plumbing."""

    def __init__(self, code: str, message: str, **context) -> None:
        super().__init__(message, **context)
        self.code = code


def error_body(exc: VizrecError) -> dict:
    return {"code": exc.code, "message": exc.message, "context": exc.context}


def current_selection(m: ChannelMap) -> list[str]:
    """Distinct mapped variables, in canonical channel order."""
    names: list[str] = []
    for _, f in m.assignments:
        if f.variable is not None and f.variable not in names:
            names.append(f.variable)
    return names


def validate_filter(clause: FilterClause, d: Dataset) -> FilterClause:
    t = d.variable(clause.variable).effective_type
    if clause.op == "range" and t not in (VarType.QUANTITATIVE, VarType.TEMPORAL):
        raise FilterError(
            f"range filter needs a quantitative or temporal variable, "
            f"{clause.variable} is {t.value}",
            variable=clause.variable,
        )
    if clause.op == "year_equals" and t is not VarType.TEMPORAL:
        raise FilterError(
            f"year filter needs a temporal variable, {clause.variable} is {t.value}",
            variable=clause.variable,
        )
    if clause.op == "in" and not isinstance(clause.value, tuple):
        raise FilterError("'in' filter takes a list of values", variable=clause.variable)
    if clause.op == "range" and (
        not isinstance(clause.value, tuple) or len(clause.value) != 2
    ):
        raise FilterError("range filter takes [low, high]", variable=clause.variable)
    return clause


def recommendations_payload(session: Session, config: ServiceConfig) -> dict:
    selection = current_selection(session.channel_map)
    if len(selection) > 2:
        return {"groups": [], "notice": SELECTION_TOO_LARGE}
    groups = enumerate_groups(
        selection, session.dataset, session.filters, bookmarks=session.bookmarks
    )
    return {
        "groups": [
            {
                "question": list(g.question_spans),
                "added": g.added_variable,
                "candidates": [
                    emitter.to_vegalite(
                        c.spec, session.dataset, schema_version=config.schema_version
                    )
                    for c in g.candidates
                ],
                "bookmarks": list(g.bookmark_ids),
            }
            for g in groups
        ],
        "notice": None,
    }


def main_spec_doc(session: Session, config: ServiceConfig) -> dict | None:
    if session.channel_map.is_empty:
        return None
    spec = build_spec(session.channel_map, session.dataset, session.filters)
    return emitter.to_vegalite(
        spec, session.dataset, schema_version=config.schema_version
    )


def snapshot(session: Session, config: ServiceConfig) -> dict:
    return {
        "id": session.id,
        "created_at": session.created_at,
        "expires_at": session.expires_at,
        "dataset": session.dataset.to_json(),
        "mapping": session.channel_map.to_json(),
        "filters": [c.to_json() for c in session.filters],
        "main_spec": main_spec_doc(session, config),
        "recommendations": recommendations_payload(session, config),
    }


def apply_mapping_ops(session: Session, body: dict) -> ChannelMap:
    """Compute the post-op map without touching the session."""
    d = session.dataset
    if "map" in body:
        return validate_map(ChannelMap.from_json(body["map"]), d)

    m = session.channel_map
    for op in body.get("ops", []):
        kind = op.get("op")
        try:
            channel = Channel(op.get("channel"))
        except ValueError:
            raise RequestError("bad_request", f"unknown channel {op.get('channel')!r}")
        if kind == "assign":
            m = assign(m, channel, FieldRef.from_json(op.get("field", {})), d)
        elif kind == "clear":
            m = clear(m, channel)
        else:
            raise RequestError("bad_request", f"unknown mapping op {kind!r}")
    if "mark" in body and body["mark"] is not None:
        try:
            mark = MarkType(body["mark"])
        except ValueError:
            raise RequestError("bad_request", f"unknown mark {body['mark']!r}")
        m = m.with_mark(mark, stacked=bool(body.get("stacked", False)))
    return m


def revalidate_map(m: ChannelMap, d: Dataset) -> ChannelMap:
    """Drop assignments a type override has invalidated; keep gating."""
    kept = {}
    for c, f in m.assignments:
        try:
            _check_field(f, c, d)
        except (InvalidFieldError, UnknownVariableError):
            continue
        kept[c] = f
    if Channel.X not in kept and Channel.Y not in kept:
        kept = {}
    return channel_map(kept)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    store = SessionStore(config.session_ttl)
    app = FastAPI(title="vizrec", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(VizrecError)
    async def handle_engine_error(request: Request, exc: VizrecError) -> JSONResponse:
        status = _STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status, content=error_body(exc))

    @app.post("/sessions", status_code=201)
    async def create_session(file: UploadFile, delimiter: str = ",") -> dict:
        raw = await file.read()
        if len(raw) > config.upload_limit:
            raise RequestError(
                "payload_too_large",
                f"upload of {len(raw)} bytes exceeds limit {config.upload_limit}",
            )
        name = (file.filename or "data").rsplit("/", 1)[-1]
        if name.endswith(".csv"):
            name = name[: -len(".csv")]
        dataset = load_csv(raw, delimiter=delimiter, name=name or "data")
        session = store.create(dataset)
        with session.lock:
            return snapshot(session, config)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return snapshot(session, config)

    @app.patch("/sessions/{session_id}/mapping")
    def patch_mapping(session_id: str, body: dict) -> dict:
        session = store.get(session_id)
        with session.lock:
            session.channel_map = apply_mapping_ops(session, body)
            return snapshot(session, config)

    @app.put("/sessions/{session_id}/types/{var}")
    def put_type(session_id: str, var: str, body: dict) -> dict:
        session = store.get(session_id)
        try:
            new_type = VarType(body.get("type"))
        except ValueError:
            raise RequestError("bad_request", f"unknown variable type {body.get('type')!r}")
        with session.lock:
            dataset = override_type(session.dataset, var, new_type)
            session.dataset = dataset
            session.channel_map = revalidate_map(session.channel_map, dataset)
            session.filters = tuple(
                c for c in session.filters if _filter_still_valid(c, dataset)
            )
            return snapshot(session, config)

    @app.put("/sessions/{session_id}/filters")
    def put_filters(session_id: str, body: dict) -> dict:
        session = store.get(session_id)
        clauses = tuple(
            validate_filter(FilterClause.from_json(doc), session.dataset)
            for doc in body.get("filters", [])
        )
        with session.lock:
            session.filters = clauses
            return snapshot(session, config)

    @app.get("/sessions/{session_id}/recommendations")
    def get_recommendations(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return recommendations_payload(session, config)

    @app.get("/sessions/{session_id}/spec")
    def get_spec(session_id: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            doc = main_spec_doc(session, config)
        if doc is None:
            raise NoMappingError("no mapping: assign a variable to x or y first")
        return Response(
            content=emitter.serialize(doc), media_type="application/json"
        )

    @app.post("/sessions/{session_id}/bookmarks", status_code=201)
    def add_bookmark(session_id: str, body: dict) -> dict:
        session = store.get(session_id)
        spec = body.get("spec")
        violations = emitter.validate(spec)
        if violations:
            raise RequestError(
                "invalid_spec", "spec fails validation", violations=violations
            )
        with session.lock:
            bm = session.bookmarks.add(spec, str(body.get("question", "")))
            return bm.to_json()

    @app.get("/sessions/{session_id}/bookmarks")
    def list_bookmarks(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return {"bookmarks": [b.to_json() for b in session.bookmarks.list()]}

    @app.delete("/sessions/{session_id}/bookmarks/{bookmark_id}")
    def remove_bookmark(session_id: str, bookmark_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            removed = session.bookmarks.remove(bookmark_id)
        if not removed:
            raise RequestError(
                "not_found", f"no bookmark {bookmark_id}", bookmark=bookmark_id
            )
        return {"removed": True}

    return app


def _filter_still_valid(clause: FilterClause, d: Dataset) -> bool:
    try:
        validate_filter(clause, d)
        return True
    except (FilterError, UnknownVariableError):
        return False


app = create_app()

__all__ = [
    "SELECTION_TOO_LARGE",
    "ServiceConfig",
    "Session",
    "SessionExpired",
    "SessionNotFound",
    "SessionStore",
    "app",
    "create_app",
    "current_selection",
    "snapshot",
    "validate_filter",
]
