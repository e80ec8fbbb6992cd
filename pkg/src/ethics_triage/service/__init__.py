"""HTTP service for interactive guideline walkthroughs."""

from .app import create_app
from .schemas import API_VERSION
from .store import DEFAULT_TTL_SECONDS, SessionStore, UnknownSession

__all__ = [
    "API_VERSION",
    "DEFAULT_TTL_SECONDS",
    "SessionStore",
    "UnknownSession",
    "create_app",
]
