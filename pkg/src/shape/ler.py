"""Loss elimination ratio bounds for a standard deductible policy."""

import logging
import math
from typing import NamedTuple, Optional

from src.cg import CGSettings, run_cg
from src.model import MixtureFamily, Sense, standard_policy_problem

logger = logging.getLogger(__name__)


class LerBounds(NamedTuple):
    ler_lo: float
    ler_hi: float
    gap: float
    converged: bool


def ler_bounds(
    mu: float,
    sigma2: float,
    b: float = math.inf,
    d: float = 0.0,
    family: Optional[MixtureFamily] = None,
    settings: Optional[CGSettings] = None,
) -> LerBounds:
    """
    Bounds on E[min(X, d)] / E[X] given the pinned mean and variance.

    The denominator is the pinned mean. The upper LER bound comes from the lower bound on
    E[max(X - d, 0)] and vice versa.
    """
    upper = run_cg(
        standard_policy_problem(mu, sigma2, d, b, family=family, sense=Sense.UPPER), settings
    )
    lower = run_cg(
        standard_policy_problem(mu, sigma2, d, b, family=family, sense=Sense.LOWER), settings
    )
    ler_lo = (mu - upper.bound) / mu
    ler_hi = (mu - lower.bound) / mu
    logger.debug(f"LER d = {d:g} ({family or 'dirac'}): [{ler_lo:.8f}, {ler_hi:.8f}]")
    return LerBounds(ler_lo, ler_hi, ler_hi - ler_lo, upper.converged and lower.converged)
