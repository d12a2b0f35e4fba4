"""
Component distributions H_x of each mixture family.

Densities and CDFs are vectorized over the evaluation point u. Degenerate uniform
components (x equal to the anchor) are point masses: they appear in CDFs as a jump and
are left out of densities.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import expit

from src.model import FamilyVariant, MixtureFamily, ProblemSpec
from src.polyalg import Domain
from src.utils.errors import DomainError, UnsupportedOperationError

logger = logging.getLogger(__name__)

# Lognormal atoms start this fraction of the problem scale above zero
ADMISSIBLE_FLOOR = 1e-6
DEGENERATE_WIDTH = 1e-12
WINDOW_QUANTILE = 1e-6


@dataclass(frozen=True)
class LognormalParams:
    mu_x: float
    sigma_x: float

    @property
    def mean(self) -> float:
        return math.exp(self.mu_x + 0.5 * self.sigma_x**2)

    @property
    def variance(self) -> float:
        return math.expm1(self.sigma_x**2) * math.exp(2.0 * self.mu_x + self.sigma_x**2)

    @property
    def distribution(self):
        return stats.lognorm(s=self.sigma_x, scale=math.exp(self.mu_x))


def lognormal_params(x: float, alpha: float) -> LognormalParams:
    """Lognormal with mean x and standard deviation alpha."""
    if not x > 0:
        raise DomainError(f"Lognormal component needs a positive mean, got x = {x}")
    if not alpha > 0:
        raise DomainError(f"Lognormal component needs alpha > 0, got {alpha}")
    sigma2 = math.log1p((alpha / x) ** 2)
    return LognormalParams(mu_x=math.log(x) - 0.5 * sigma2, sigma_x=math.sqrt(sigma2))


def lognormal_param_arrays(xs: np.ndarray, alpha: float) -> tuple:
    """Vectorized ``lognormal_params``: (mu_x, sigma_x) arrays."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise DomainError("Lognormal components need positive means")
    sigma2 = np.log1p((alpha / xs) ** 2)
    return np.log(xs) - 0.5 * sigma2, np.sqrt(sigma2)


def _check_interval(a: float, b: float, eta: float):
    if not b > a:
        raise DomainError(f"Smoothed uniform needs b > a, got [{a}, {b}]")
    if not eta > 0:
        raise DomainError(f"Smoothed uniform needs eta > 0, got {eta}")


def smoothed_uniform_pdf(a: float, b: float, eta: float, u):
    """Logistic-difference density approximating Uniform(a, b)."""
    _check_interval(a, b, eta)
    u = np.asarray(u, dtype=float)
    right = u > 0.5 * (a + b)
    # On the right half the mirrored form avoids subtracting two numbers close to one
    value = np.where(
        right,
        expit(-eta * (u - b)) - expit(-eta * (u - a)),
        expit(eta * (u - a)) - expit(eta * (u - b)),
    )
    out = value / (b - a)
    return float(out) if out.ndim == 0 else out


def smoothed_uniform_cdf(a: float, b: float, eta: float, u):
    """CDF of the smoothed uniform, in log-sum-exp form."""
    _check_interval(a, b, eta)
    u = np.asarray(u, dtype=float)
    span = eta * (b - a)
    lower_form = (np.logaddexp(0.0, eta * (u - a)) - np.logaddexp(0.0, eta * (u - b))) / span
    upper_form = 1.0 - (
        np.logaddexp(0.0, -eta * (u - b)) - np.logaddexp(0.0, -eta * (u - a))
    ) / span
    out = np.clip(np.where(u > 0.5 * (a + b), upper_form, lower_form), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def logistic_pdf(eta: float, z):
    """Logistic density with scale 1/eta at offset z."""
    z = np.asarray(z, dtype=float)
    return eta * expit(eta * z) * expit(-eta * z)


def _uniform_interval(family: MixtureFamily, x: float) -> tuple:
    anchor = family.anchor
    return min(anchor, x), max(anchor, x)


def _degenerate(lo: float, hi: float) -> bool:
    return hi - lo <= DEGENERATE_WIDTH * max(1.0, abs(hi))


def component_pdf(family: MixtureFamily, x: float, u):
    """
    Density of H_x at u.

    Raises:
        UnsupportedOperationError: for the Dirac family
    """
    u = np.asarray(u, dtype=float)
    variant = family.variant
    if variant == FamilyVariant.DIRAC:
        raise UnsupportedOperationError("Dirac components have no density")
    if variant in (FamilyVariant.UNIFORM_ZERO, FamilyVariant.KHINTCHINE_UNIFORM):
        lo, hi = _uniform_interval(family, x)
        if _degenerate(lo, hi):
            out = np.zeros_like(u)
        else:
            out = np.where((u >= lo) & (u <= hi), 1.0 / (hi - lo), 0.0)
    elif variant == FamilyVariant.LOGNORMAL:
        out = lognormal_params(x, family.alpha).distribution.pdf(u)
    else:
        lo, hi = _uniform_interval(family, x)
        if _degenerate(lo, hi):
            out = logistic_pdf(family.eta, u - lo)
        else:
            out = smoothed_uniform_pdf(lo, hi, family.eta, u)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def component_cdf(family: MixtureFamily, x: float, u):
    """CDF of H_x at u (a unit step at x for the Dirac family)."""
    u = np.asarray(u, dtype=float)
    variant = family.variant
    if variant == FamilyVariant.DIRAC:
        out = np.where(u >= x, 1.0, 0.0)
    elif variant in (FamilyVariant.UNIFORM_ZERO, FamilyVariant.KHINTCHINE_UNIFORM):
        lo, hi = _uniform_interval(family, x)
        if _degenerate(lo, hi):
            out = np.where(u >= lo, 1.0, 0.0)
        else:
            out = np.clip((u - lo) / (hi - lo), 0.0, 1.0)
    elif variant == FamilyVariant.LOGNORMAL:
        out = lognormal_params(x, family.alpha).distribution.cdf(u)
    else:
        lo, hi = _uniform_interval(family, x)
        if _degenerate(lo, hi):
            out = expit(family.eta * (u - lo))
        else:
            out = smoothed_uniform_cdf(lo, hi, family.eta, u)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def component_window(family: MixtureFamily, x: float, q: float = WINDOW_QUANTILE) -> tuple:
    """(lower, upper) q- and (1-q)-quantiles of H_x, or its exact range when bounded."""
    variant = family.variant
    if variant == FamilyVariant.DIRAC:
        return x, x
    if variant in (FamilyVariant.UNIFORM_ZERO, FamilyVariant.KHINTCHINE_UNIFORM):
        return _uniform_interval(family, x)
    if variant == FamilyVariant.LOGNORMAL:
        dist = lognormal_params(x, family.alpha).distribution
        return float(dist.ppf(q)), float(dist.isf(q))
    lo, hi = _uniform_interval(family, x)
    tail = math.log((1.0 - q) / q) / family.eta
    return lo - tail, hi + tail


def atom_domain(spec: ProblemSpec) -> Domain:
    """Interval the mixture parameters x may range over for ``spec``."""
    support = spec.support
    if spec.family.variant == FamilyVariant.LOGNORMAL:
        floor = ADMISSIBLE_FLOOR * spec.scale
        return Domain(max(support.lower, floor), support.upper)
    return support
