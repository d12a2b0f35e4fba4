"""
Bisection over the lognormal mixture parameter alpha.

Small alpha gives narrow components that reproduce the spiky point-mass extremal
distribution; as alpha approaches the largest admissible standard deviation the mixture
collapses onto a single lognormal. The smallest alpha whose extremal mixture is unimodal
gives a bound for distributions that are both smooth and unimodal.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from src.cg import BoundResult, CGSettings, MomentEnvelope, moment_envelope, run_cg
from src.model import FamilyVariant, ProblemSpec, Sense
from src.shape.distribution import UNIMODALITY_GRID, MixtureDistribution, is_unimodal
from src.utils.errors import BracketError, ValidationError

logger = logging.getLogger(__name__)


@dataclass
class BracketStep:
    alpha: float
    unimodal: bool
    bound: float


@dataclass
class BisectionResult:
    alpha_star: float
    bound: float
    unimodal: bool
    trace: List[BracketStep] = field(default_factory=list)
    result: Optional[BoundResult] = None

    def to_dict(self) -> dict:
        return {
            "alpha_star": self.alpha_star,
            "bound": self.bound,
            "unimodal": self.unimodal,
            "trace": [vars(step) for step in self.trace],
        }


def _check_lognormal(spec: ProblemSpec):
    if spec.family.variant != FamilyVariant.LOGNORMAL:
        raise ValidationError(
            f"Alpha search needs a lognormal mixture family, got {spec.family}", field="family"
        )


def _check_bracket(spec, alpha_lo, alpha_hi, envelope, settings):
    if not 0 < alpha_lo < alpha_hi:
        raise BracketError(
            "Bracket must satisfy 0 < alpha_lo < alpha_hi",
            {"alpha_lo": alpha_lo, "alpha_hi": alpha_hi},
        )
    envelope = envelope or moment_envelope(spec, settings)
    if not envelope.var_unbounded and alpha_hi >= envelope.sigma_hi:
        raise BracketError(
            f"alpha_hi must be below the largest admissible standard deviation "
            f"{envelope.sigma_hi:.10g}",
            {"alpha_hi": alpha_hi, "sigma_max": envelope.sigma_hi},
        )


def _solve_at(spec: ProblemSpec, alpha: float, settings: CGSettings, grid: int):
    result = run_cg(spec.with_family(spec.family.with_alpha(alpha)), settings)
    unimodal = is_unimodal(MixtureDistribution.from_result(result), grid)
    logger.info(
        f"alpha = {alpha:.6g}: bound {result.bound:.10g}, "
        f"{'unimodal' if unimodal else 'multimodal'} ({len(result.atoms)} atoms)"
    )
    return result, unimodal


def bisect_alpha(
    spec: ProblemSpec,
    alpha_lo: float,
    alpha_hi: float,
    eps: float,
    settings: Optional[CGSettings] = None,
    envelope: Optional[MomentEnvelope] = None,
    unimodality_grid: int = UNIMODALITY_GRID,
) -> BisectionResult:
    """
    Smallest alpha in [alpha_lo, alpha_hi] whose extremal lognormal mixture is unimodal.

    The bracket must have a unimodal mixture at alpha_hi and a multimodal one at alpha_lo.
    Bisection stops once the bracket is no wider than ``eps`` and returns the solve at the
    unimodal end.

    Raises:
        BracketError: invalid bracket, with the unimodality found at each endpoint
    """
    _check_lognormal(spec)
    if not eps > 0:
        raise ValidationError(f"Bisection tolerance must be > 0, got {eps}", field="eps")
    settings = settings or CGSettings()
    _check_bracket(spec, alpha_lo, alpha_hi, envelope, settings)

    hi_result, hi_unimodal = _solve_at(spec, alpha_hi, settings, unimodality_grid)
    lo_result, lo_unimodal = _solve_at(spec, alpha_lo, settings, unimodality_grid)
    trace = [
        BracketStep(alpha_lo, lo_unimodal, lo_result.bound),
        BracketStep(alpha_hi, hi_unimodal, hi_result.bound),
    ]
    if lo_unimodal or not hi_unimodal:
        raise BracketError(
            "Bracket does not straddle the unimodality boundary",
            {"alpha_lo": (alpha_lo, lo_unimodal), "alpha_hi": (alpha_hi, hi_unimodal)},
        )

    best = hi_result
    while alpha_hi - alpha_lo > eps:
        alpha = 0.5 * (alpha_lo + alpha_hi)
        result, unimodal = _solve_at(spec, alpha, settings, unimodality_grid)
        trace.append(BracketStep(alpha, unimodal, result.bound))
        if unimodal:
            alpha_hi, best = alpha, result
        else:
            alpha_lo = alpha

    logger.info(f"Unimodality boundary: alpha* = {alpha_hi:.6g}, bound {best.bound:.10g}")
    return BisectionResult(alpha_hi, best.bound, True, trace, best)


def match_alpha_to_bound(
    spec: ProblemSpec,
    target_bound: float,
    alpha_lo: float,
    alpha_hi: float,
    eps: float,
    settings: Optional[CGSettings] = None,
    unimodality_grid: int = UNIMODALITY_GRID,
) -> BisectionResult:
    """
    Alpha at which the lognormal mixture bound equals ``target_bound``.

    Upper bounds decrease as alpha grows (lower bounds increase), so the crossing is found
    by bisection on the sign of bound - target.

    Raises:
        BracketError: target not between the bounds at the bracket endpoints
    """
    _check_lognormal(spec)
    if not 0 < alpha_lo < alpha_hi:
        raise BracketError(
            "Bracket must satisfy 0 < alpha_lo < alpha_hi",
            {"alpha_lo": alpha_lo, "alpha_hi": alpha_hi},
        )
    settings = settings or CGSettings()
    sign = 1.0 if spec.sense == Sense.UPPER else -1.0

    def solve(alpha: float) -> BoundResult:
        return run_cg(spec.with_family(spec.family.with_alpha(alpha)), settings)

    def above(r: BoundResult) -> bool:
        return sign * (r.bound - target_bound) > 0

    lo_result, hi_result = solve(alpha_lo), solve(alpha_hi)
    trace = [
        BracketStep(alpha_lo, False, lo_result.bound),
        BracketStep(alpha_hi, False, hi_result.bound),
    ]
    if not above(lo_result) or above(hi_result):
        raise BracketError(
            f"Target bound {target_bound:.10g} is not bracketed",
            {"alpha_lo": (alpha_lo, lo_result.bound), "alpha_hi": (alpha_hi, hi_result.bound)},
        )

    best = hi_result
    while alpha_hi - alpha_lo > eps:
        alpha = 0.5 * (alpha_lo + alpha_hi)
        result = solve(alpha)
        trace.append(BracketStep(alpha, False, result.bound))
        if above(result):
            alpha_lo = alpha
        else:
            alpha_hi, best = alpha, result

    unimodal = is_unimodal(MixtureDistribution.from_result(best), unimodality_grid)
    logger.info(
        f"Bound {target_bound:.10g} matched at alpha = {alpha_hi:.6g} "
        f"(bound {best.bound:.10g}, |diff| {math.fabs(best.bound - target_bound):.3e})"
    )
    return BisectionResult(alpha_hi, best.bound, unimodal, trace, best)
