"""Exception hierarchy shared by all packages."""

from typing import Optional


class SemiboundsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SemiboundsError, ValueError):
    """A point or parameter lies outside the domain where an operation is defined."""


class NotDivisibleError(SemiboundsError, ValueError):
    """Polynomial does not vanish at the requested linear factor."""

    def __init__(self, residual: float, root: float):
        self.residual = residual
        self.root = root
        super().__init__(f"Polynomial is not divisible by (x - {root!r}): p(c) = {residual:.3e}")


class ValidationError(SemiboundsError, ValueError):
    """Invalid problem specification or problem file content."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class ProblemFileError(ValidationError):
    """Problem file could not be read, decoded or validated."""


class UnsupportedOperationError(SemiboundsError):
    """Operation is not defined for the given mixture family."""


class NumericError(SemiboundsError):
    """A numerical routine failed to reach its tolerance."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        detail = f" ({self.diagnostics})" if self.diagnostics else ""
        super().__init__(f"{message}{detail}")


class MasterInfeasibleError(SemiboundsError):
    """The master LP has no feasible weights over the current atom set."""


class MomentSetInfeasibleError(SemiboundsError):
    """No distribution on the support satisfies the moment constraints."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(
            f"Moment constraints are infeasible over the support (violation {residual:.6g})"
        )


class BracketError(SemiboundsError):
    """Bisection bracket does not straddle the unimodality boundary."""

    def __init__(self, message: str, report: Optional[dict] = None):
        self.report = report or {}
        detail = f" {self.report}" if self.report else ""
        super().__init__(f"{message}{detail}")
