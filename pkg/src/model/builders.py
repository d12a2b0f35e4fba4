"""
Payoff functions and ready-made bound problems.

Insurance-style payoffs (policy excess, coinsurance, ruin indicator, semivariance) and the
two standard problem shapes: pinned power moments for a policy payoff, and option prices
with a pinned mean for a variance bound.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

from src.model.problem import (
    MixtureFamily,
    MomentConstraint,
    ProblemSpec,
    Sense,
)
from src.polyalg import Domain, PiecewiseFunction, Polynomial
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)

NONNEGATIVE = Domain(0.0, math.inf)


def _piecewise_on(support: Domain, cuts: Sequence[float], polys: Sequence[Polynomial]):
    """
    Build the function equal to polys[i] between cuts[i-1] and cuts[i] (open ends at the
    support) and restrict it to ``support``.
    """
    full = PiecewiseFunction.from_polynomials(
        [-math.inf] + list(cuts) + [math.inf], list(polys)
    )
    return _merge_equal(full.restrict(support))


def _merge_equal(fn: PiecewiseFunction) -> PiecewiseFunction:
    bps = [fn.breakpoints[0]]
    pieces = []
    for piece, right in zip(fn.pieces, fn.breakpoints[1:]):
        if pieces and pieces[-1] == piece:
            bps[-1] = right
            continue
        pieces.append(piece)
        bps.append(right)
    return PiecewiseFunction(tuple(bps), tuple(pieces))


def monomial(power: int, support: Domain = NONNEGATIVE) -> PiecewiseFunction:
    if power < 1:
        raise ValidationError(f"Monomial power must be >= 1, got {power}", field="power")
    return PiecewiseFunction.polynomial(Polynomial.monomial(power), support)


def call_payoff(d: float, support: Domain = NONNEGATIVE) -> PiecewiseFunction:
    """max(x - d, 0): the payment of a policy with deductible d (a call with strike d)."""
    if not math.isfinite(d):
        raise ValidationError("Deductible must be finite", field="d")
    zero = Polynomial.constant(0.0)
    excess = Polynomial((-float(d), 1.0))
    return _piecewise_on(support, [d], [zero, excess])


def coinsurance_payoff(
    d: float, u: float, gamma: float, support: Domain = NONNEGATIVE
) -> PiecewiseFunction:
    """gamma * (min(x, u) - min(x, d)): the insurer's share of losses between d and u."""
    if not (0.0 <= d < u) or not math.isfinite(u):
        raise ValidationError(f"Coinsurance needs 0 <= d < u < inf, got d={d}, u={u}",
                              field="d")
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError(f"Coinsurance share must lie in [0, 1], got {gamma}", field="gamma")
    polys = [
        Polynomial.constant(0.0),
        Polynomial((-gamma * d, gamma)),
        Polynomial.constant(gamma * (u - d)),
    ]
    return _piecewise_on(support, [d, u], polys)


def indicator_payoff(lo: float, hi: float, support: Domain = NONNEGATIVE) -> PiecewiseFunction:
    """1 on [lo, hi), 0 elsewhere; hi may be +inf (e.g. ruin probability P(X >= lo))."""
    if not lo < hi:
        raise ValidationError(f"Indicator needs lo < hi, got [{lo}, {hi})", field="lo")
    one, zero = Polynomial.constant(1.0), Polynomial.constant(0.0)
    if math.isinf(hi):
        return _piecewise_on(support, [lo], [zero, one])
    return _piecewise_on(support, [lo, hi], [zero, one, zero])


def variance_payoff(mu: float, support: Domain = NONNEGATIVE) -> PiecewiseFunction:
    """(x - mu)^2."""
    return PiecewiseFunction.polynomial(Polynomial((mu * mu, -2.0 * mu, 1.0)), support)


def semivariance_payoff(mu: float, support: Domain = NONNEGATIVE) -> PiecewiseFunction:
    """max(mu - x, 0)^2: downside semivariance about mu."""
    below = Polynomial((mu * mu, -2.0 * mu, 1.0))
    return _piecewise_on(support, [mu], [below, Polynomial.constant(0.0)])


def pinned_moment(power: int, value: float, support: Domain = NONNEGATIVE) -> MomentConstraint:
    return MomentConstraint(monomial(power, support), value, value, label=f"E[X^{power}]")


def standard_policy_problem(
    mu: float,
    sigma2: float,
    d: float,
    b: float = math.inf,
    m: int = 2,
    third_moment: Optional[float] = None,
    family: Optional[MixtureFamily] = None,
    sense: Sense = Sense.UPPER,
) -> ProblemSpec:
    """
    Bound on E[max(X - d, 0)] for a loss X on [0, b] with pinned power moments.

    m = 2 pins the mean and the second moment mu^2 + sigma2; m = 3 additionally pins
    E[X^3] = ``third_moment``.

    Raises:
        ValidationError: invalid parameters or E[X^2] < E[X]^2
    """
    if m not in (2, 3):
        raise ValidationError(f"m must be 2 or 3, got {m}", field="m")
    if not mu > 0:
        raise ValidationError(f"mu must be > 0, got {mu}", field="mu")
    if not sigma2 > 0:
        raise ValidationError(
            f"sigma2 must be > 0 (E[X^2] >= E[X]^2), got {sigma2}", field="sigma2"
        )
    if not d >= 0:
        raise ValidationError(f"Deductible must be >= 0, got {d}", field="d")
    if not b > mu:
        raise ValidationError(f"Maximum loss b = {b} must exceed the mean {mu}", field="b")
    if m == 3 and third_moment is None:
        raise ValidationError("m = 3 requires the third moment", field="third_moment")

    support = Domain(0.0, b)
    moments = [mu, mu * mu + sigma2, third_moment]
    constraints = tuple(pinned_moment(j, moments[j - 1], support) for j in range(1, m + 1))
    spec = ProblemSpec(
        support=support,
        target=call_payoff(d, support),
        constraints=constraints,
        sense=sense,
        family=family or MixtureFamily.dirac(),
    )
    return spec.validate()


def option_constrained_problem(
    prices: Sequence[Tuple[float, float]],
    mu: float,
    support: Domain = NONNEGATIVE,
    family: Optional[MixtureFamily] = None,
    sense: Sense = Sense.UPPER,
) -> ProblemSpec:
    """
    Bound on the variance E[(X - mu)^2] given the mean and call prices (K_j, c_j).

    Raises:
        ValidationError: duplicate strikes or negative prices
    """
    strikes = [float(k) for k, _ in prices]
    if len(set(strikes)) != len(strikes):
        raise ValidationError(f"Duplicate strikes in {strikes}", field="prices")
    constraints: List[MomentConstraint] = []
    for k, c in sorted(prices):
        if c < 0:
            raise ValidationError(f"Option price for strike {k} is negative", field="prices")
        constraints.append(
            MomentConstraint(call_payoff(k, support), c, c, label=f"call({k:g})")
        )
    constraints.append(pinned_moment(1, mu, support))
    spec = ProblemSpec(
        support=support,
        target=variance_payoff(mu, support),
        constraints=tuple(constraints),
        sense=sense,
        family=family or MixtureFamily.dirac(),
    )
    return spec.validate()
