"""Exception hierarchy shared by every engine module.

Each error carries a stable machine-readable ``code`` plus optional
``details``; the HTTP layer maps the four classes onto 400/404/409/422.
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all domain errors."""

    http_status = 500

    def __init__(self, code: str, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class ValidationFailed(EngineError):
    """Malformed or out-of-range input values."""

    http_status = 400


class NotFound(EngineError):
    """Referenced entity does not exist."""

    http_status = 404


class StateConflict(EngineError):
    """Operation illegal in the entity's current state (incl. immutability and duplicates)."""

    http_status = 409


class RuleViolation(EngineError):
    """A workflow rule was violated: time window, gate checklist, competition minimum."""

    http_status = 422


class ConfigError(Exception):
    """Invalid service configuration; aborts startup with a diagnostic."""


class LogCorrupt(Exception):
    """Audit log cannot be replayed; ``line_no`` names the offending line (1-based)."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"audit log corrupt at line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason
