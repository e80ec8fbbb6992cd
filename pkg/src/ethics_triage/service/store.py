"""In-memory session store with opaque random ids and TTL eviction.

Sessions are immutable values; the store serializes updates per session so
concurrent requests to one session never observe a torn state, while requests
for distinct sessions proceed independently.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from ..guideline import Session

DEFAULT_TTL_SECONDS = 24 * 60 * 60


class UnknownSession(KeyError):
    pass


@dataclass
class _Entry:
    session: Session
    last_activity: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl_seconds = ttl_seconds
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def _evict_expired_locked(self) -> None:
        now = time.monotonic()
        expired = [
            sid
            for sid, entry in self._entries.items()
            if now - entry.last_activity > self.ttl_seconds
        ]
        for sid in expired:
            del self._entries[sid]

    def create(self, session: Session) -> str:
        with self._lock:
            self._evict_expired_locked()
            session_id = secrets.token_hex(16)  # 128-bit opaque id
            while session_id in self._entries:  # pragma: no cover - negligible
                session_id = secrets.token_hex(16)
            self._entries[session_id] = _Entry(session=session, last_activity=time.monotonic())
            return session_id

    def _entry(self, session_id: str) -> _Entry:
        with self._lock:
            self._evict_expired_locked()
            entry = self._entries.get(session_id)
            if entry is None:
                raise UnknownSession(session_id)
            return entry

    def get(self, session_id: str) -> Session:
        entry = self._entry(session_id)
        entry.last_activity = time.monotonic()
        return entry.session

    def update(self, session_id: str, transform: Callable[[Session], Session]) -> Session:
        """Atomically replace a session with transform(current)."""
        entry = self._entry(session_id)
        with entry.lock:
            entry.session = transform(entry.session)
            entry.last_activity = time.monotonic()
            return entry.session

    def __len__(self) -> int:
        with self._lock:
            self._evict_expired_locked()
            return len(self._entries)
