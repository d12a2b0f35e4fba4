"""
Problem specification: support, target, moment constraints, bound sense and the mixture
family whose components replace point masses.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.polyalg import Domain, PiecewiseFunction
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)

EPSILON_FACTOR = 1e-8
CAP_SIGMAS = 20.0
SAMPLE_POINTS = 257


class Sense(str, Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def flipped(self) -> "Sense":
        return Sense.LOWER if self == Sense.UPPER else Sense.UPPER


class FamilyVariant(str, Enum):
    DIRAC = "dirac"
    UNIFORM_ZERO = "uniform_zero"
    KHINTCHINE_UNIFORM = "khintchine_uniform"
    LOGNORMAL = "lognormal"
    SMOOTHED_UNIFORM = "smoothed_uniform"


@dataclass(frozen=True)
class MixtureFamily:
    """Component distribution H_x attached to each atom x."""

    variant: FamilyVariant = FamilyVariant.DIRAC
    mode: Optional[float] = None
    alpha: Optional[float] = None
    eta: Optional[float] = None

    def __post_init__(self):
        try:
            variant = FamilyVariant(self.variant)
        except ValueError:
            raise ValidationError(f"Unknown mixture family '{self.variant}'", field="variant")
        object.__setattr__(self, "variant", variant)

        needs_mode = variant in (FamilyVariant.KHINTCHINE_UNIFORM, FamilyVariant.SMOOTHED_UNIFORM)
        if needs_mode and (self.mode is None or not math.isfinite(self.mode)):
            raise ValidationError(f"{variant.value} family requires a finite mode", field="mode")
        if variant == FamilyVariant.LOGNORMAL and (self.alpha is None or not self.alpha > 0):
            raise ValidationError("lognormal family requires alpha > 0", field="alpha")
        if variant == FamilyVariant.SMOOTHED_UNIFORM and (self.eta is None or not self.eta > 0):
            raise ValidationError("smoothed_uniform family requires eta > 0", field="eta")

    @classmethod
    def dirac(cls) -> "MixtureFamily":
        return cls(FamilyVariant.DIRAC)

    @classmethod
    def uniform_zero(cls) -> "MixtureFamily":
        return cls(FamilyVariant.UNIFORM_ZERO)

    @classmethod
    def khintchine_uniform(cls, mode: float) -> "MixtureFamily":
        return cls(FamilyVariant.KHINTCHINE_UNIFORM, mode=float(mode))

    @classmethod
    def lognormal(cls, alpha: float) -> "MixtureFamily":
        return cls(FamilyVariant.LOGNORMAL, alpha=float(alpha))

    @classmethod
    def smoothed_uniform(cls, mode: float, eta: float) -> "MixtureFamily":
        return cls(FamilyVariant.SMOOTHED_UNIFORM, mode=float(mode), eta=float(eta))

    def with_alpha(self, alpha: float) -> "MixtureFamily":
        return MixtureFamily.lognormal(alpha)

    @property
    def has_density(self) -> bool:
        return self.variant != FamilyVariant.DIRAC

    @property
    def anchor(self) -> Optional[float]:
        """Common endpoint of the uniform components (0 or the mode)."""
        if self.variant == FamilyVariant.UNIFORM_ZERO:
            return 0.0
        if self.variant in (FamilyVariant.KHINTCHINE_UNIFORM, FamilyVariant.SMOOTHED_UNIFORM):
            return self.mode
        return None

    @property
    def leaves_support(self) -> bool:
        """Components put mass outside [x_lo, x_hi] of the atoms."""
        return self.variant in (FamilyVariant.LOGNORMAL, FamilyVariant.SMOOTHED_UNIFORM)

    def to_dict(self) -> dict:
        out = {"variant": self.variant.value}
        for name in ("mode", "alpha", "eta"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v:g}" for k, v in self.to_dict().items() if k != "variant")
        return f"{self.variant.value}({params})" if params else self.variant.value


@dataclass(frozen=True)
class MomentConstraint:
    """sigma_lo <= E[g(X)] <= sigma_hi."""

    g: PiecewiseFunction
    sigma_lo: float
    sigma_hi: float
    label: str = ""

    def __post_init__(self):
        lo, hi = float(self.sigma_lo), float(self.sigma_hi)
        if math.isnan(lo) or math.isnan(hi) or math.isinf(lo) or math.isinf(hi):
            raise ValidationError("Constraint bounds must be finite", field="constraints")
        if lo > hi:
            raise ValidationError(
                f"Constraint '{self.label}' has sigma_lo {lo} > sigma_hi {hi}", field="constraints"
            )
        object.__setattr__(self, "sigma_lo", lo)
        object.__setattr__(self, "sigma_hi", hi)


def monomial_power(fn: PiecewiseFunction) -> Optional[int]:
    """j if ``fn`` is the single polynomial piece x**j (j >= 1), else None."""
    if len(fn.pieces) != 1 or not fn.is_polynomial:
        return None
    coeffs = fn.pieces[0].numerator.coefficients
    power = len(coeffs) - 1
    if power >= 1 and coeffs[-1] == 1.0 and not any(coeffs[:-1]):
        return power
    return None


@dataclass(frozen=True)
class ProblemSpec:
    """
    Bound problem over distributions on ``support``:

        sup/inf E[target(X)]  s.t.  sigma_lo_j <= E[g_j(X)] <= sigma_hi_j.

    ``cg_epsilon`` and ``search_cap`` are optional; the effective values are derived from
    the problem when they are None.
    """

    support: Domain
    target: PiecewiseFunction
    constraints: Tuple[MomentConstraint, ...]
    sense: Sense = Sense.UPPER
    family: MixtureFamily = field(default_factory=MixtureFamily.dirac)
    cg_epsilon: Optional[float] = None
    search_cap: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        try:
            object.__setattr__(self, "sense", Sense(self.sense))
        except ValueError:
            raise ValidationError(f"Unknown sense '{self.sense}'", field="sense")
        self._check_structure()

    def validate(self) -> "ProblemSpec":
        """
        Full validation: structural checks plus moment consistency (E[X^2] >= E[X]^2).

        Construction only runs the structural part, so a moment-inconsistent problem can
        still be built and reported infeasible by the solver.
        """
        self._check_structure()
        self._check_jensen()
        return self

    def _check_structure(self):
        if not self.constraints:
            raise ValidationError("At least one moment constraint is required", field="constraints")
        if not self._covers(self.target):
            raise ValidationError(
                f"Target support {self.target.support} does not cover {self.support}",
                field="target",
            )
        for j, c in enumerate(self.constraints):
            if not self._covers(c.g):
                raise ValidationError(
                    f"Constraint {j} support {c.g.support} does not cover {self.support}",
                    field=f"constraints[{j}].g",
                )
        if self.family.leaves_support and self.support.lower < 0:
            raise ValidationError(
                f"{self.family.variant.value} family needs a support within [0, inf)",
                field="support",
            )
        if self.family.variant == FamilyVariant.UNIFORM_ZERO and self.support.lower < 0:
            raise ValidationError("uniform_zero family needs a support within [0, inf)",
                                  field="support")
        anchor = self.family.anchor
        if self.family.variant == FamilyVariant.KHINTCHINE_UNIFORM and not self.support.contains(
            anchor
        ):
            raise ValidationError(f"Mode {anchor} lies outside {self.support}", field="mode")
        if self.cg_epsilon is not None and not self.cg_epsilon > 0:
            raise ValidationError("cg_epsilon must be > 0", field="cg_epsilon")
        if self.search_cap is not None and not self.search_cap > max(self.support.lower, 0.0):
            raise ValidationError("search_cap must exceed the support lower end",
                                  field="search_cap")

    def _covers(self, fn: PiecewiseFunction) -> bool:
        return fn.support.lower <= self.support.lower and fn.support.upper >= self.support.upper

    def _check_jensen(self):
        first = self.pinned_moment_bounds(1)
        second = self.pinned_moment_bounds(2)
        if first is None or second is None:
            return
        lo, hi = first
        smallest_square = 0.0 if lo <= 0.0 <= hi else min(lo * lo, hi * hi)
        if second[1] < smallest_square - 1e-12 * max(1.0, smallest_square):
            raise ValidationError(
                f"E[X^2] <= {second[1]:g} is below E[X]^2 >= {smallest_square:g} (Jensen)",
                field="constraints",
            )

    def pinned_moment_bounds(self, power: int) -> Optional[Tuple[float, float]]:
        """(sigma_lo, sigma_hi) of the constraint on E[X**power], if there is one."""
        for c in self.constraints:
            if monomial_power(c.g) == power:
                return c.sigma_lo, c.sigma_hi
        return None

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def effective_search_cap(self) -> float:
        """Upper end of the numeric search window."""
        if math.isfinite(self.support.upper):
            return self.support.upper
        if self.search_cap is not None:
            return self.search_cap
        first = self.pinned_moment_bounds(1)
        second = self.pinned_moment_bounds(2)
        if first is not None and second is not None:
            var = max(second[1] - first[0] ** 2, 0.0)
            return first[1] + CAP_SIGMAS * math.sqrt(var)
        # No mean/variance information: scale off the finite breakpoints and mean bounds
        references = [1.0]
        for fn in [self.target] + [c.g for c in self.constraints]:
            references.extend(abs(b) for b in fn.breakpoints if math.isfinite(b))
        if first is not None:
            references.append(abs(first[1]))
        return max(self.support.lower, 0.0) + 100.0 * max(references)

    @property
    def search_domain(self) -> Domain:
        return Domain(self.support.lower, self.effective_search_cap)

    @property
    def effective_epsilon(self) -> float:
        if self.cg_epsilon is not None:
            return self.cg_epsilon
        window = self.search_domain
        xs = np.linspace(window.lower, window.upper, SAMPLE_POINTS)
        peak = float(np.max(np.abs(self.target.evaluate(xs))))
        return EPSILON_FACTOR * max(1.0, peak)

    @property
    def scale(self) -> float:
        return self.search_domain.scale

    def replace(self, **changes) -> "ProblemSpec":
        return replace(self, **changes)

    def with_family(self, family: MixtureFamily) -> "ProblemSpec":
        return replace(self, family=family)

    def with_sense(self, sense: Sense) -> "ProblemSpec":
        return replace(self, sense=Sense(sense))

    def negated(self) -> "ProblemSpec":
        """Target -f with the opposite sense; its bound is the negation of this one."""
        return replace(self, target=-self.target, sense=self.sense.flipped)

    def describe(self) -> str:
        return (
            f"{self.sense.value} bound, family {self.family}, support {self.support}, "
            f"m = {self.m}"
        )
