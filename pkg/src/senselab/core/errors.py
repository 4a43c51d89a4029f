"""Domain errors shared by the workflow rules, storage, and HTTP layers."""

from __future__ import annotations


class DomainError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    code = "domain_error"


class AuthorizationError(DomainError):
    code = "forbidden"


class NotFoundError(DomainError):
    code = "not_found"


class StateError(DomainError):
    """Operation not valid in the subject's current state."""

    code = "state_error"


class SlotLimitError(StateError):
    code = "slot_limit"


class ValidationError(DomainError):
    code = "validation"

    def __init__(self, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.fields = fields or []


class ExpiredCodeError(DomainError):
    code = "expired_code"
