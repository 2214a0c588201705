"""Custom exceptions for norm evaluation and the command-line surface.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any


class PQNormError(Exception):
    """Base exception for pqnorm errors."""

    exit_code: int = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class ParseError(PQNormError):
    """Raised when an input document is not valid JSON or violates its schema."""

    exit_code = 2


class SemanticError(PQNormError):
    """Raised when a well-formed input is mathematically inconsistent."""

    exit_code = 3


class DimensionError(SemanticError):
    """Raised on shape, level or dimension mismatches."""

    pass


class DomainMismatchError(SemanticError):
    """Raised when an element does not live in the expected space."""

    pass


class InvalidParameterError(SemanticError):
    """Raised on out-of-range parameters (p < 1, non-projections, m >= n)."""

    pass


class CheckFailure(PQNormError):
    """Raised when the verification suite reports a non-passing check."""

    exit_code = 4
