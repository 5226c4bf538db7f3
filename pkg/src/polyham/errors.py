"""Exception types shared across the package.

The CLI maps these onto process exit codes; library callers can catch them
individually.
"""


class PolyhamError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(PolyhamError, ValueError):
    """Two objects that must share a dimension do not."""


class ParseError(PolyhamError, ValueError):
    """Malformed input file.  Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidParametersError(PolyhamError, ValueError):
    """Parameters violate a documented precondition."""


class EmptyInputError(PolyhamError, ValueError):
    """An operation that needs a nonempty collection got an empty one."""


class ResourceBudgetError(PolyhamError, RuntimeError):
    """A projected or actual size exceeds the configured budget."""

    def __init__(self, message: str, projected: int | None = None, budget: int | None = None):
        self.projected = projected
        self.budget = budget
        if projected is not None and budget is not None:
            message = f"{message} (projected {projected} > budget {budget})"
        super().__init__(message)


class VerificationError(PolyhamError, RuntimeError):
    """A statistical or differential verification check failed."""
