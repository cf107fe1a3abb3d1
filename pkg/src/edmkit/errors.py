"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations


class MeteringError(Exception):
    """Base class for all toolkit errors."""


class FormatError(MeteringError):
    """Malformed or structurally inconsistent input file.

    Carries the offending path and, when known, the 1-based line number.
    """

    def __init__(self, message: str, *, path: str | None = None, line_no: int | None = None):
        location = ""
        if path is not None:
            location = f"{path}:" if line_no is None else f"{path}:{line_no}:"
        super().__init__(f"{location} {message}".strip())
        self.path = path
        self.line_no = line_no


class DomainError(MeteringError):
    """A value, or a combination of values, violates a type invariant."""


class ConfigError(MeteringError):
    """Inconsistent configuration, e.g. a step that does not match the grid."""


class DataError(MeteringError):
    """Input data cannot support the requested computation."""


class StateError(MeteringError):
    """Operation applied to a state machine in the wrong phase."""
