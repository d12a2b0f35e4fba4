"""Dense univariate polynomials with ascending coefficients."""

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.utils.errors import NotDivisibleError

# Coefficients below this fraction of the largest one are truncated to zero
CANONICAL_CUTOFF = 1e-12
DIVISIBILITY_TOLERANCE = 1e-9

Number = Union[int, float]


def _canonical(coefficients: Iterable[Number]) -> tuple:
    coeffs = np.asarray(list(coefficients), dtype=float)
    if coeffs.size == 0:
        return (0.0,)
    peak = float(np.max(np.abs(coeffs)))
    if peak == 0.0:
        return (0.0,)
    coeffs = np.where(np.abs(coeffs) < CANONICAL_CUTOFF * peak, 0.0, coeffs)
    nonzero = np.nonzero(coeffs)[0]
    return tuple(float(c) for c in coeffs[: nonzero[-1] + 1])


@dataclass(frozen=True)
class Polynomial:
    """Polynomial sum(coefficients[i] * x**i), kept in canonical form."""

    coefficients: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _canonical(self.coefficients))

    @classmethod
    def constant(cls, value: Number) -> "Polynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, power: int, scale: Number = 1.0) -> "Polynomial":
        return cls((0.0,) * power + (scale,))

    @classmethod
    def linear_factor(cls, root: Number) -> "Polynomial":
        """The polynomial (x - root)."""
        return cls((-float(root), 1.0))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (0.0,)

    @property
    def leading(self) -> float:
        return self.coefficients[-1]

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def eval_scale(self, x: Number) -> float:
        """Magnitude sum(|a_i| |x|^i), the natural yardstick for residuals at x."""
        return float(npoly.polyval(abs(x), np.abs(self.coefficients)))

    def __call__(self, x):
        return npoly.polyval(x, self.coefficients)

    def derivative(self) -> "Polynomial":
        return Polynomial(npoly.polyder(self.coefficients))

    def antiderivative(self) -> "Polynomial":
        return antiderivative(self)

    def shift(self, offset: Number) -> "Polynomial":
        """The polynomial q(y) = p(y + offset)."""
        result = Polynomial.constant(0.0)
        base = Polynomial((float(offset), 1.0))
        for c in reversed(self.coefficients):
            result = result * base + c
        return result

    def __add__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polyadd(self.coefficients, other.coefficients))
        return Polynomial(npoly.polyadd(self.coefficients, (float(other),)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polymul(self.coefficients, other.coefficients))
        return Polynomial(tuple(float(other) * c for c in self.coefficients))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = " + ".join(f"{c:.6g}*x^{i}" for i, c in enumerate(self.coefficients) if c)
        return f"Polynomial({terms or '0'})"


def antiderivative(p: Polynomial) -> Polynomial:
    """Return G with G' = p and G(0) = 0."""
    return Polynomial(npoly.polyint(p.coefficients))


def divide_by_linear(p: Polynomial, c: Number) -> Polynomial:
    """
    Exact quotient q of p(x) = (x - c) q(x).

    The remainder p(c) must vanish within DIVISIBILITY_TOLERANCE * max|coeff|; it is
    discarded once the check passes.
    """
    residual = float(p(c))
    if abs(residual) > DIVISIBILITY_TOLERANCE * p.scale:
        raise NotDivisibleError(residual, float(c))
    quotient, _ = npoly.polydiv(p.coefficients, (-float(c), 1.0))
    return Polynomial(quotient)
