"""Exception hierarchy shared across the toolkit.

Two classes of failure are distinguished because the CLI maps them to
different exit codes: bad inputs (exit 2) and computations that cannot
proceed on otherwise well-formed inputs (exit 3).
"""

from __future__ import annotations


class LloqkdError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(LloqkdError):
    """One or more inputs are out of range or malformed.

    ``fields`` carries the names of the offending parameters when known,
    so callers can report every violation at once.
    """

    def __init__(self, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.fields = fields or []


class ComputationError(LloqkdError):
    """A computation cannot proceed (e.g. an unphysical noise budget)."""
