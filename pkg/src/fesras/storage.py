"""Review sessions and their file-per-session persistence.

Sessions move Created -> InProgress -> Submitted, timestamps are assigned
server-side at each transition, and every save goes through an atomic
write-then-rename so a crash mid-write can never corrupt a stored session.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import InvalidStateError
from .scoring import DEFAULT_SESSION_CAP_MINUTES, parse_timestamp
from .technique import ReadingTechnique, ReportForm, empty_form

STATE_CREATED = "Created"
STATE_IN_PROGRESS = "InProgress"
STATE_SUBMITTED = "Submitted"


def _now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass
class Session:
    """One inspector's review of one technique."""

    session_id: str
    technique: ReadingTechnique
    state: str = STATE_CREATED
    started_at: datetime | None = None
    submitted_at: datetime | None = None
    form: ReportForm | None = None
    version: int = 0

    @classmethod
    def create(cls, technique: ReadingTechnique) -> "Session":
        return cls(session_id=uuid.uuid4().hex, technique=technique)

    def start(self, at: datetime | None = None) -> None:
        if self.state != STATE_CREATED:
            raise InvalidStateError(
                f"session {self.session_id} cannot start from state {self.state}"
            )
        self.state = STATE_IN_PROGRESS
        self.started_at = at or _now()
        self.form = empty_form(list(self.technique.requirements))
        self.version += 1

    def save_draft(self, form: ReportForm) -> None:
        if self.state != STATE_IN_PROGRESS:
            raise InvalidStateError(
                f"session {self.session_id} cannot accept a draft in state {self.state}"
            )
        self.form = form
        self.version += 1

    def submit(self, form: ReportForm, at: datetime | None = None) -> None:
        if self.state != STATE_IN_PROGRESS:
            raise InvalidStateError(
                f"session {self.session_id} cannot be submitted from state {self.state}"
            )
        self.form = form
        self.submitted_at = at or _now()
        self.state = STATE_SUBMITTED
        self.version += 1

    def duration_minutes(self, now: datetime | None = None) -> float | None:
        if self.started_at is None:
            return None
        end = self.submitted_at or now or _now()
        return (end - self.started_at).total_seconds() / 60.0

    def over_cap(self, cap_minutes: float = DEFAULT_SESSION_CAP_MINUTES) -> bool:
        duration = self.duration_minutes()
        return duration is not None and duration > cap_minutes

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "technique_id": self.technique.story.id,
            "technique": self.technique.to_dict(),
            "state": self.state,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "submitted_at": self.submitted_at.isoformat() if self.submitted_at else None,
            "form": self.form.to_dict() if self.form else None,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        return cls(
            session_id=data["session_id"],
            technique=ReadingTechnique.from_dict(data["technique"]),
            state=data["state"],
            started_at=(
                parse_timestamp(data["started_at"]) if data.get("started_at") else None
            ),
            submitted_at=(
                parse_timestamp(data["submitted_at"])
                if data.get("submitted_at")
                else None
            ),
            form=ReportForm.from_dict(data["form"]) if data.get("form") else None,
            version=data.get("version", 0),
        )


def atomic_write_json(path: Path, payload: dict) -> None:
    """Write JSON so that either the old or the new content survives a crash."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=path.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


class SessionStore:
    """Sessions persisted one JSON file each under ``<data_dir>/sessions``.

    Mutation is serialized per session id, so concurrent requests touching
    different sessions never block each other while a single session's
    state changes atomically.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._registry_lock = threading.Lock()
        self._locks: dict[str, threading.RLock] = {}

    def lock_for(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.RLock()
            return self._locks[session_id]

    def _path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.json"

    def save(self, session: Session) -> None:
        atomic_write_json(self._path(session.session_id), session.to_dict())

    def load(self, session_id: str) -> Session | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as handle:
            return Session.from_dict(json.load(handle))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.json"))


class TechniqueRegistry:
    """Generated techniques available to the service, keyed by story id."""

    def __init__(self, techniques_dir: str | Path):
        self.techniques_dir = Path(techniques_dir)

    def ids(self) -> list[str]:
        return sorted(
            p.name.removesuffix(".technique.json")
            for p in self.techniques_dir.glob("*.technique.json")
        )

    def load(self, technique_id: str) -> ReadingTechnique | None:
        path = self.techniques_dir / f"{technique_id}.technique.json"
        if not path.exists():
            return None
        return ReadingTechnique.load(path)
