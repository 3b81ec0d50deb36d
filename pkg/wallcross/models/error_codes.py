"""
Exit codes and error types for the wallcross engines.

Defines the exit codes of the command line driver, their message strings and
the exception hierarchy raised by the library.
"""

import enum
from typing import Optional


class ExitCode(enum.IntEnum):
    """Process exit codes"""
    SUCCESS = 0
    VALIDATION_ERROR = 1
    PRECONDITION_FAILED = 2
    INTERNAL_INVARIANT = 3


MESSAGES = {
    ExitCode.SUCCESS: "Success.",
    ExitCode.VALIDATION_ERROR: "Input failed validation.",
    ExitCode.PRECONDITION_FAILED: "Mathematical precondition failed.",
    ExitCode.INTERNAL_INVARIANT: "Internal invariant violated.",
}


def get_message(code: ExitCode) -> str:
    """Get message string for an exit code"""
    return MESSAGES.get(code, "Unknown exit code")


class WallcrossError(Exception):
    """Base class for all library errors.

    Attributes:
        code: Exit code the command line driver reports for this error
        field: Name of the offending input field, if any
    """

    code: ExitCode = ExitCode.INTERNAL_INVARIANT

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def __str__(self) -> str:
        if self.field:
            return f"{self.field}: {self.message}"
        return self.message


class ValidationError(WallcrossError):
    """Malformed input: dimension mismatch, bad vectors, bad polynomial text."""

    code = ExitCode.VALIDATION_ERROR


class PreconditionError(WallcrossError):
    """A mathematical precondition does not hold (non-regular tau, improper system)."""

    code = ExitCode.PRECONDITION_FAILED


class EngineInvariantError(WallcrossError):
    """An invariant the engine relies on was violated."""

    code = ExitCode.INTERNAL_INVARIANT
