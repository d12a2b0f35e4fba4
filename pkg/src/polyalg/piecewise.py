"""
Piecewise rational functions of one variable.

Each piece is N(x) or N(x) / (x - c): a polynomial numerator over at most a linear
denominator. That is the closed form produced by averaging a piecewise polynomial over
uniform components, and it keeps every critical-point equation polynomial.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.polyalg.domain import Domain
from src.polyalg.polynomial import Polynomial
from src.polyalg.roots import roots_real
from src.utils.errors import DomainError, UnsupportedOperationError

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-12
SAME_POLE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Piece:
    """N(x) when ``pole`` is None, otherwise N(x) / (x - pole) with ``limit`` at the pole."""

    numerator: Polynomial
    pole: Optional[float] = None
    limit: Optional[float] = None

    @property
    def is_rational(self) -> bool:
        return self.pole is not None

    def _near_pole(self, x):
        return np.abs(np.asarray(x, dtype=float) - self.pole) <= POLE_TOLERANCE * max(
            1.0, abs(self.pole)
        )

    def value(self, x: float) -> float:
        if self.pole is None:
            return float(self.numerator(x))
        if self._near_pole(x):
            if self.limit is None:
                raise DomainError(f"Piece has a pole at x = {self.pole}")
            return float(self.limit)
        return float(self.numerator(x)) / (x - self.pole)

    def values(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.pole is None:
            return self.numerator(xs)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.numerator(xs) / (xs - self.pole)
        limit = np.nan if self.limit is None else self.limit
        return np.where(self._near_pole(xs), limit, out)

    def critical_polynomial(self) -> Polynomial:
        """Numerator of the derivative: N' or N'(x)(x - c) - N(x)."""
        if self.pole is None:
            return self.numerator.derivative()
        factor = Polynomial.linear_factor(self.pole)
        return self.numerator.derivative() * factor - self.numerator

    def over_pole(self, pole: float) -> Polynomial:
        """Numerator of this piece written over (x - pole)."""
        if self.pole is None:
            return self.numerator * Polynomial.linear_factor(pole)
        return self.numerator

    def limit_at(self, pole: float) -> Optional[float]:
        """Value of the piece at ``pole`` (the stored limit for rational pieces)."""
        if self.pole is None:
            return float(self.numerator(pole))
        return self.limit

    def asymptote(self, direction: int) -> float:
        """Limit of the piece as x -> direction * inf (may be +-inf)."""
        num = self.numerator
        if num.is_zero:
            return 0.0
        order = num.degree - (1 if self.is_rational else 0)
        if order < 0:
            return 0.0
        if order == 0:
            return float(num.leading)
        sign = num.leading * (direction**order)
        return math.inf if sign > 0 else -math.inf

    def scaled(self, k: float) -> "Piece":
        limit = None if self.limit is None else k * self.limit
        return Piece(self.numerator * k, self.pole, limit)


@dataclass(frozen=True)
class MaxResult:
    argmax: float
    value: float
    unbounded: bool = False


@dataclass(frozen=True)
class PiecewiseFunction:
    """
    Function defined by ``pieces[i]`` on [breakpoints[i], breakpoints[i+1]).

    The last piece is closed on the right. Outer breakpoints may be infinite.
    """

    breakpoints: tuple
    pieces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        pieces = tuple(self.pieces)
        if len(bps) != len(pieces) + 1 or not pieces:
            raise DomainError("Need one more breakpoint than pieces and at least one piece")
        if any(math.isnan(b) for b in bps) or any(b >= c for b, c in zip(bps[:-1], bps[1:])):
            raise DomainError(f"Breakpoints must be strictly increasing: {bps}")
        if any(math.isinf(b) for b in bps[1:-1]):
            raise DomainError("Only the outer breakpoints may be infinite")
        for piece, left, right in zip(pieces, bps[:-1], bps[1:]):
            if piece.is_rational and left < piece.pole < right and piece.limit is None:
                raise DomainError(
                    f"Pole {piece.pole} inside piece [{left}, {right}] without a limit value"
                )
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)

    # ---- construction ---------------------------------------------------------------

    @classmethod
    def polynomial(cls, poly: Polynomial, support: Domain = Domain()) -> "PiecewiseFunction":
        return cls((support.lower, support.upper), (Piece(poly),))

    @classmethod
    def from_polynomials(
        cls, breakpoints: Sequence[float], polys: Sequence[Polynomial]
    ) -> "PiecewiseFunction":
        return cls(tuple(breakpoints), tuple(Piece(p) for p in polys))

    # ---- queries --------------------------------------------------------------------

    @property
    def support(self) -> Domain:
        return Domain(self.breakpoints[0], self.breakpoints[-1])

    @property
    def is_polynomial(self) -> bool:
        return not any(p.is_rational for p in self.pieces)

    def piece_index(self, x: float) -> int:
        """Index of the piece used at ``x``; a breakpoint belongs to the piece on its right."""
        if not self.breakpoints[0] <= x <= self.breakpoints[-1]:
            raise DomainError(f"x = {x} outside support {self.support}")
        idx = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return min(idx, len(self.pieces) - 1)

    def eval(self, x: float) -> float:
        return self.pieces[self.piece_index(x)].value(float(x))

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized ``eval``; raises DomainError if any point lies outside the support."""
        xs = np.asarray(xs, dtype=float)
        if xs.size and (np.min(xs) < self.breakpoints[0] or np.max(xs) > self.breakpoints[-1]):
            raise DomainError(f"Evaluation points outside support {self.support}")
        idx = np.clip(
            np.searchsorted(self.breakpoints, xs, side="right") - 1, 0, len(self.pieces) - 1
        )
        out = np.empty_like(xs)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece.values(xs[mask])
        return out

    # ---- transformations ------------------------------------------------------------

    def restrict(self, dom: Domain) -> "PiecewiseFunction":
        """The same function on ``dom`` intersected with the support."""
        window = self.support.intersect(dom)
        bps = [window.lower]
        pieces = []
        for piece, left, right in zip(self.pieces, self.breakpoints[:-1], self.breakpoints[1:]):
            if right <= window.lower or left >= window.upper:
                continue
            if pieces:
                bps.append(left)
            pieces.append(piece)
        bps.append(window.upper)
        return PiecewiseFunction(tuple(bps), tuple(pieces))

    def extended(self) -> "PiecewiseFunction":
        """The same pieces with the outer breakpoints moved to -inf and +inf."""
        bps = (-math.inf,) + self.breakpoints[1:-1] + (math.inf,)
        return PiecewiseFunction(bps, self.pieces)

    def scaled(self, k: float) -> "PiecewiseFunction":
        return PiecewiseFunction(self.breakpoints, tuple(p.scaled(k) for p in self.pieces))

    def __neg__(self) -> "PiecewiseFunction":
        return self.scaled(-1.0)

    def __add__(self, other: "PiecewiseFunction") -> "PiecewiseFunction":
        return linear_combination([self, other], [1.0, 1.0])

    def __sub__(self, other: "PiecewiseFunction") -> "PiecewiseFunction":
        return linear_combination([self, other], [1.0, -1.0])


def _interior_point(left: float, right: float) -> float:
    if math.isfinite(left) and math.isfinite(right):
        return 0.5 * (left + right)
    if math.isfinite(left):
        return left + 1.0
    if math.isfinite(right):
        return right - 1.0
    return 0.0


def linear_combination(
    functions: Sequence[PiecewiseFunction],
    coefficients: Sequence[float],
    constant: float = 0.0,
) -> PiecewiseFunction:
    """
    constant + sum(coefficients[k] * functions[k]) on the common support.

    Rational pieces sharing an interval must have the same pole; they are put over the
    common denominator and their limits combine linearly.
    """
    if len(functions) != len(coefficients) or not functions:
        raise DomainError("functions and coefficients must be non-empty and of equal length")
    window = functions[0].support
    for fn in functions[1:]:
        window = window.intersect(fn.support)

    cuts = {window.lower, window.upper}
    for fn in functions:
        cuts.update(b for b in fn.breakpoints[1:-1] if window.lower < b < window.upper)
    bps = sorted(cuts)

    pieces = []
    for left, right in zip(bps[:-1], bps[1:]):
        inside = _interior_point(left, right)
        parts = [
            (k, fn.pieces[fn.piece_index(inside)])
            for fn, k in zip(functions, coefficients)
            if k != 0.0
        ]
        poles = [p.pole for _, p in parts if p.is_rational]
        if not poles:
            num = Polynomial.constant(constant)
            for k, p in parts:
                num = num + p.numerator * k
            pieces.append(Piece(num))
            continue

        pole = poles[0]
        if any(abs(c - pole) > SAME_POLE_TOLERANCE * max(1.0, abs(pole)) for c in poles):
            raise UnsupportedOperationError(f"Cannot combine pieces with distinct poles {poles}")
        num = Polynomial.linear_factor(pole) * constant
        limit: Optional[float] = constant
        for k, p in parts:
            num = num + p.over_pole(pole) * k
            part_limit = p.limit_at(pole)
            limit = None if limit is None or part_limit is None else limit + k * part_limit
        pieces.append(Piece(num, pole, limit))

    return PiecewiseFunction(tuple(bps), tuple(pieces))


def global_max(fn: PiecewiseFunction, dom: Optional[Domain] = None) -> MaxResult:
    """
    Global maximum of ``fn`` over ``dom`` from its candidate set.

    Candidates are piece endpoints, finite domain ends and real roots of each piece's
    critical polynomial. On an infinite side the piece's limit is inspected: growth to
    +inf returns ``unbounded=True``; a finite asymptote competes as a candidate located
    at +-inf. Ties resolve to the smallest x.
    """
    dom = fn.support if dom is None else fn.support.intersect(dom)
    candidates: List[tuple] = []

    for piece, left, right in zip(fn.pieces, fn.breakpoints[:-1], fn.breakpoints[1:]):
        lo, hi = max(left, dom.lower), min(right, dom.upper)
        if lo > hi:
            continue
        for end in (lo, hi):
            if math.isfinite(end):
                candidates.append((end, fn.eval(end)))
        if lo == hi:
            continue
        critical = piece.critical_polynomial()
        if not critical.is_zero:
            for x in roots_real(critical, Domain(lo, hi)):
                if not (piece.is_rational and piece._near_pole(x) and piece.limit is None):
                    candidates.append((x, fn.eval(x)))
        for end, direction in ((lo, -1), (hi, 1)):
            if math.isinf(end):
                tail = piece.asymptote(direction)
                if tail == math.inf:
                    return MaxResult(end, math.inf, True)
                if tail > -math.inf:
                    candidates.append((end, tail))

    if not candidates:
        raise DomainError(f"No maximum candidates for function on {dom}")
    candidates.sort(key=lambda c: c[0])
    best = max(range(len(candidates)), key=lambda i: (candidates[i][1], -i))
    return MaxResult(float(candidates[best][0]), float(candidates[best][1]), False)
