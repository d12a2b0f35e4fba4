"""Real intervals used as supports and search domains."""

import math
from dataclasses import dataclass

from src.utils.errors import DomainError


@dataclass(frozen=True)
class Domain:
    """Interval [lower, upper]; either end may be infinite."""

    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        lower, upper = float(self.lower), float(self.upper)
        if math.isnan(lower) or math.isnan(upper) or not lower < upper:
            raise DomainError(f"Invalid domain [{lower}, {upper}]: lower must be < upper")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def scale(self) -> float:
        """Magnitude of the finite ends, at least one."""
        ends = [abs(v) for v in (self.lower, self.upper) if math.isfinite(v)]
        return max([1.0] + ends)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol

    def intersect(self, other: "Domain") -> "Domain":
        return Domain(max(self.lower, other.lower), min(self.upper, other.upper))

    def __str__(self) -> str:
        return f"[{self.lower:g}, {self.upper:g}]"
