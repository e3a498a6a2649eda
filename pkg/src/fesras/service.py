"""HTTP API for live review sessions.

The service exposes the generated techniques, manages session lifecycle
(create, start, draft saves, submit) and scores submitted sessions against
an answer key. Timing is server-authoritative: clients never supply
timestamps. Errors are returned as ``{"code", "message"}`` bodies, plus a
``findings`` list when a submitted report fails validation.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import InvalidStateError, KeyMismatchError
from .scoring import (
    DEFAULT_SESSION_CAP_MINUTES,
    AnswerKey,
    ReviewSubmission,
    score,
    validate_form,
)
from .storage import (
    STATE_SUBMITTED,
    Session,
    SessionStore,
    TechniqueRegistry,
)
from .technique import ReportForm

DATA_DIR_ENV = "FESRAS_DATA"


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str, findings=None):
        self.status_code = status_code
        self.code = code
        self.message = message
        self.findings = findings
        super().__init__(message)


class CreateSessionRequest(BaseModel):
    technique_id: str


class ReportRequest(BaseModel):
    form: dict
    version: int
    draft: bool = False


def resolve_data_dir(data_dir: str | Path | None) -> Path:
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path("fesras-data")


def create_app(
    data_dir: str | Path | None = None,
    cap_minutes: float = DEFAULT_SESSION_CAP_MINUTES,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service around a data directory.

    The directory holds ``techniques/`` (written by the generate command)
    and ``sessions/`` (written by the service itself).
    """
    base = resolve_data_dir(data_dir)
    registry = TechniqueRegistry(base / "techniques")
    store = SessionStore(base)

    app = FastAPI(title="fesras review service")

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        body = {"code": exc.code, "message": exc.message}
        if exc.findings is not None:
            body["findings"] = [finding.to_dict() for finding in exc.findings]
        return JSONResponse(status_code=exc.status_code, content=body)

    def get_session(session_id: str) -> Session:
        session = store.load(session_id)
        if session is None:
            raise ApiError(404, "not-found", f"no session {session_id!r}")
        return session

    def session_view(session: Session) -> dict:
        view = session.to_dict()
        view["over_cap"] = session.over_cap(cap_minutes)
        view["cap_minutes"] = cap_minutes
        view["duration_minutes"] = session.duration_minutes()
        return view

    @app.get("/api/techniques")
    def list_techniques() -> list[dict]:
        entries = []
        for technique_id in registry.ids():
            technique = registry.load(technique_id)
            if technique is None:
                continue
            entries.append(
                {
                    "technique_id": technique_id,
                    "story_text": technique.story.raw_text,
                    "properties": technique.link.to_dict()["properties"],
                    "requirement_count": len(technique.requirements),
                }
            )
        return entries

    @app.post("/api/sessions", status_code=201)
    def create_session(request: CreateSessionRequest) -> dict:
        technique = registry.load(request.technique_id)
        if technique is None:
            raise ApiError(
                404, "not-found", f"no technique {request.technique_id!r}"
            )
        session = Session.create(technique)
        with store.lock_for(session.session_id):
            store.save(session)
        return {"session_id": session.session_id, "state": session.state}

    @app.get("/api/sessions/{session_id}")
    def get_session_view(session_id: str) -> dict:
        return session_view(get_session(session_id))

    @app.post("/api/sessions/{session_id}/start")
    def start_session(session_id: str) -> dict:
        with store.lock_for(session_id):
            session = get_session(session_id)
            try:
                session.start()
            except InvalidStateError as exc:
                raise ApiError(409, "invalid-state", str(exc)) from exc
            store.save(session)
            return session_view(session)

    @app.post("/api/sessions/{session_id}/report")
    def post_report(session_id: str, request: ReportRequest) -> dict:
        with store.lock_for(session_id):
            session = get_session(session_id)
            if request.version != session.version:
                raise ApiError(
                    409,
                    "version-conflict",
                    f"client has version {request.version}, "
                    f"server is at {session.version}",
                )
            try:
                form = ReportForm.from_dict(request.form)
            except (KeyError, TypeError, ValueError) as exc:
                raise ApiError(422, "malformed-form", str(exc)) from exc
            try:
                if request.draft:
                    session.save_draft(form)
                else:
                    findings = validate_form(session.technique, form)
                    if findings:
                        raise ApiError(
                            422,
                            "validation-failed",
                            "report failed validation",
                            findings=findings,
                        )
                    session.submit(form)
            except InvalidStateError as exc:
                raise ApiError(409, "invalid-state", str(exc)) from exc
            store.save(session)
            return session_view(session)

    @app.get("/api/sessions/{session_id}/score")
    def score_session(session_id: str, key: str) -> dict:
        session = get_session(session_id)
        if session.state != STATE_SUBMITTED:
            raise ApiError(
                409, "invalid-state", "only submitted sessions can be scored"
            )
        key_path = Path(key)
        if not key_path.is_absolute():
            key_path = base / key_path
        if not key_path.exists():
            raise ApiError(404, "not-found", f"no answer key at {key_path}")
        answer_key = AnswerKey.load(key_path)
        submission = ReviewSubmission.single(
            session.technique, session.form, session.started_at, session.submitted_at
        )
        try:
            result = score(submission, answer_key)
        except KeyMismatchError as exc:
            raise ApiError(422, "key-mismatch", str(exc)) from exc
        body = result.to_dict()
        body["session_id"] = session_id
        body["over_cap"] = session.over_cap(cap_minutes)
        return body

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app
