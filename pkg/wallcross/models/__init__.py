"""
Data models for wallcross.

Only the error types are re-exported here; they are imported by the utility
and polynomial layers, which the problem models themselves depend on.
Import the models from their modules (weights, walls, problems).
"""

from .error_codes import (
    ExitCode,
    MESSAGES,
    get_message,
    WallcrossError,
    ValidationError,
    PreconditionError,
    EngineInvariantError
)

__all__ = [
    'ExitCode',
    'MESSAGES',
    'get_message',
    'WallcrossError',
    'ValidationError',
    'PreconditionError',
    'EngineInvariantError'
]
