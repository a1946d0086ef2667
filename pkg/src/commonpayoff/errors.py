"""Exception hierarchy.

Two families matter to callers: :class:`ParseError` for unreadable input
(DIMACS text, game files) and :class:`ValidationError` for inputs that parse
but violate a contract. The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed textual input, optionally located by line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    pass


class InvalidGame(ValidationError):
    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid game: " + "; ".join(self.violations))


class DimensionMismatch(ValidationError):
    """A strategy refers to players, observations or actions the game lacks."""


class NotCommonPayoff(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class SizeLimitExceeded(ValidationError):
    """Raised instead of materialising an enumeration larger than the cap."""

    def __init__(self, what: str, count: int, cap: int, dims: list[str] | None = None):
        self.count = count
        self.cap = cap
        self.dims = dims or []
        shape = " x ".join(self.dims) if self.dims else str(count)
        super().__init__(f"{what} has {shape} = {count} entries, above the cap of {cap}")


class MalformedFormula(ValidationError):
    pass


class AssignmentError(ValidationError):
    """Partial assignment, or an assignment that fails to satisfy the formula."""
