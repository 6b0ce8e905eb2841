"""Exception types shared across the package."""

from __future__ import annotations


class RegtriError(Exception):
    """Base class for all errors raised by regtri."""


class ValidationError(RegtriError, ValueError):
    """Bad input: invalid parameters, malformed data, violated preconditions.

    ``code`` is a short stable identifier, used by the CLI and by tests to
    tell failure modes apart.
    """

    code = "invalid"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class EdgeError(ValidationError):
    code = "edge"


class NotRegularError(ValidationError):
    code = "not-regular"


class InfeasibleError(ValidationError):
    code = "infeasible"


class ParamsError(ValidationError):
    code = "params"


class Graph6Error(ValidationError):
    """Malformed graph6 text. ``offset`` is the byte position of the problem."""

    code = "graph6"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class KernelCheckError(RegtriError, AssertionError):
    """An internal cross-check failed. Always a bug, never bad input."""
