"""Extremal mean and variance consistent with a problem's moment constraints."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.cg.engine import BoundResult, CGSettings, run_cg
from src.model import MixtureFamily, ProblemSpec, Sense, monomial, pinned_moment
from src.utils.errors import MomentSetInfeasibleError
from src.utils.numerics import golden_section_max

logger = logging.getLogger(__name__)

SWEEP_POINTS = 17
PINNED_TOLERANCE = 1e-9
REFINE_TOLERANCE = 1e-6


@dataclass
class MomentEnvelope:
    mu_lo: float
    mu_hi: float
    var_hi: float
    mu_lo_unbounded: bool = False
    mu_hi_unbounded: bool = False
    var_unbounded: bool = False

    @property
    def sigma_hi(self) -> float:
        return math.sqrt(max(self.var_hi, 0.0))


def _solve(spec: ProblemSpec, power: int, sense: Sense, settings: CGSettings) -> BoundResult:
    target = monomial(power, spec.support)
    return run_cg(spec.replace(target=target, sense=sense), settings)


def _second_moment_at(spec: ProblemSpec, mean: float, settings: CGSettings) -> tuple:
    """(sup E[X^2] - mean^2, capped) with E[X] additionally pinned to ``mean``."""
    pinned = spec.replace(
        constraints=spec.constraints + (pinned_moment(1, mean, spec.support),),
        target=monomial(2, spec.support),
        sense=Sense.UPPER,
    )
    try:
        result = run_cg(pinned, settings)
    except MomentSetInfeasibleError:
        return -math.inf, False
    return result.bound - mean * mean, result.capped


def moment_envelope(spec: ProblemSpec, settings: Optional[CGSettings] = None) -> MomentEnvelope:
    """
    (inf E[X], sup E[X], sup Var[X]) over point-mass mixtures satisfying the constraints.

    When the mean is not pinned, sup Var is found by sweeping a pinned mean over
    [inf E[X], sup E[X]] and refining the best sweep point by golden-section search.
    """
    settings = settings or CGSettings()
    base = spec.replace(family=MixtureFamily.dirac())

    low = _solve(base, 1, Sense.LOWER, settings)
    high = _solve(base, 1, Sense.UPPER, settings)
    mu_lo, mu_hi = low.bound, high.bound
    width = mu_hi - mu_lo

    if width <= PINNED_TOLERANCE * max(1.0, abs(mu_hi)):
        mean = 0.5 * (mu_lo + mu_hi)
        second = _solve(base, 2, Sense.UPPER, settings)
        var_hi, var_capped = second.bound - mean * mean, second.capped
    else:
        means = np.linspace(mu_lo, mu_hi, SWEEP_POINTS)
        sweep = [_second_moment_at(base, m, settings) for m in means]
        values = np.array([v for v, _ in sweep])
        var_capped = any(c for _, c in sweep)
        best = int(np.argmax(values))
        lower = means[max(best - 1, 0)]
        upper = means[min(best + 1, SWEEP_POINTS - 1)]

        def variance(points):
            return np.array([_second_moment_at(base, float(m), settings)[0] for m in points])

        _, refined = golden_section_max(
            variance, np.array([lower]), np.array([upper]), REFINE_TOLERANCE * width
        )
        var_hi = max(float(values[best]), float(refined[0]))

    envelope = MomentEnvelope(
        mu_lo=mu_lo,
        mu_hi=mu_hi,
        var_hi=var_hi,
        mu_lo_unbounded=low.capped,
        mu_hi_unbounded=high.capped,
        var_unbounded=var_capped,
    )
    logger.info(
        f"Moment envelope: mean in [{mu_lo:.10g}, {mu_hi:.10g}], max variance {var_hi:.10g}"
        + (" (unbounded)" if var_capped else "")
    )
    return envelope
