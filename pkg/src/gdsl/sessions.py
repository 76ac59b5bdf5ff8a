"""Live design sessions with file-backed persistence.

A session holds one configuration and the pattern compiled from it; the
pattern is recompiled on every config change, so the stored document only
needs the configuration and the history. One JSON file per session,
written with an atomic rename; per-session locks serialize mutations.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .body import BodyMeasurements
from .errors import ParseError
from .garments import assemble
from .pattern import Pattern
from .schema import DesignConfiguration, DesignSchema


@dataclass
class Session:
    id: str
    config: DesignConfiguration
    pattern: Pattern
    history: list[dict] = field(default_factory=list)
    created: float = 0.0
    updated: float = 0.0


class SessionStore:
    """Loads and persists sessions under one data directory."""

    def __init__(self, data_dir: str | Path, schema: DesignSchema,
                 body: BodyMeasurements):
        self.dir = Path(data_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.schema = schema
        self.body = body
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.dir.glob("*.json")):
            session = self._load_file(path)
            self._sessions[session.id] = session

    def _load_file(self, path: Path) -> Session:
        try:
            doc = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"corrupt session file {path.name}: {exc.msg}",
                             line=exc.lineno) from None
        config = DesignConfiguration(doc["config"]["assignments"])
        return Session(
            id=doc["id"],
            config=config,
            pattern=assemble(config, self.body, self.schema),
            history=list(doc.get("history", [])),
            created=float(doc.get("created", 0.0)),
            updated=float(doc.get("updated", 0.0)),
        )

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def create(self, config: DesignConfiguration,
               history_entry: dict | None = None) -> Session:
        now = time.time()
        session = Session(
            id=uuid.uuid4().hex[:12],
            config=config,
            pattern=assemble(config, self.body, self.schema),
            history=[history_entry] if history_entry else [],
            created=now,
            updated=now,
        )
        with self.lock(session.id):
            self._sessions[session.id] = session
            self._save(session)
        return session

    def get(self, session_id: str) -> Session | None:
        return self._sessions.get(session_id)

    def ids(self) -> list[str]:
        return sorted(self._sessions)

    def update(self, session: Session, config: DesignConfiguration,
               history_entry: dict) -> Session:
        """Swap in a new config; the pattern invariant is re-established here."""
        session.config = config
        session.pattern = assemble(config, self.body, self.schema)
        session.history.append(history_entry)
        session.updated = time.time()
        self._save(session)
        return session

    def _save(self, session: Session):
        doc = {
            "id": session.id,
            "config": {"assignments": session.config.assignments},
            "history": session.history,
            "created": session.created,
            "updated": session.updated,
        }
        final = self.dir / f"{session.id}.json"
        tmp = self.dir / f".{session.id}.json.tmp"
        tmp.write_text(json.dumps(doc, indent=2) + "\n", "utf-8")
        os.replace(tmp, final)
