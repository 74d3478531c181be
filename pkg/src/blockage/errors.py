"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class BlockageError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BlockageError, ValueError):
    """An input lies outside the domain of the requested operation."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field


class ConvergenceError(BlockageError, ArithmeticError):
    """Adaptive quadrature stopped before reaching the requested tolerance."""

    def __init__(self, message: str, value: float, achieved_error: float) -> None:
        super().__init__(message)
        self.value = value
        self.achieved_error = achieved_error


class ClampError(BlockageError, FloatingPointError):
    """A fraction left [0, 1] by more than floating-point noise allows."""


class ScenarioFileError(BlockageError):
    """A scenario file could not be parsed or contains invalid keys."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.line = line
