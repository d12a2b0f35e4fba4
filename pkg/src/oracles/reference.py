"""Closed-form reference values used to validate column-generation bounds."""

import math

import numpy as np
from scipy.special import ndtr

from src.utils.errors import DomainError


def normal_cdf(z):
    """Standard normal CDF, accurate in both tails."""
    value = ndtr(np.asarray(z, dtype=float))
    return float(value) if np.ndim(value) == 0 else value


def black_scholes_call(S0: float, K: float, r: float, vol: float, T: float) -> float:  # noqa: N803
    """European call price S0 N(d1) - K exp(-rT) N(d2)."""
    if not (S0 > 0 and K > 0 and vol > 0 and T > 0):
        raise DomainError(
            f"Black-Scholes needs positive inputs, got S0={S0}, K={K}, vol={vol}, T={T}"
        )
    if math.isinf(K):
        return 0.0
    root_t = vol * math.sqrt(T)
    d1 = (math.log(S0 / K) + (r + 0.5 * vol * vol) * T) / root_t
    d2 = d1 - root_t
    return S0 * normal_cdf(d1) - K * math.exp(-r * T) * normal_cdf(d2)


def lo_upper_bound(mu: float, sigma: float, d: float) -> float:
    """
    Sharp upper bound on E[max(X - d, 0)] over distributions on [0, inf) with mean mu and
    standard deviation sigma.

    Below the regime boundary d* = (mu^2 + sigma^2) / (2 mu) the extremal distribution puts
    its mass on {0, (mu^2 + sigma^2) / mu}; above it the two-point distribution straddling d
    gives the mean-variance bound.
    """
    if not (mu > 0 and sigma > 0):
        raise DomainError(f"Need mu > 0 and sigma > 0, got mu={mu}, sigma={sigma}")
    if d < 0:
        raise DomainError(f"Strike must be >= 0, got {d}")
    second = mu * mu + sigma * sigma
    if d >= second / (2.0 * mu):
        return 0.5 * ((mu - d) + math.hypot(mu - d, sigma))
    return mu - d * mu * mu / second


def lognormal_call_expectation(mean: float, sd: float, d: float) -> float:
    """Undiscounted E[max(X - d, 0)] for a lognormal X with the given mean and sd."""
    if not (mean > 0 and sd > 0):
        raise DomainError(f"Need mean > 0 and sd > 0, got mean={mean}, sd={sd}")
    if d <= 0:
        return mean - d
    sigma = math.sqrt(math.log1p((sd / mean) ** 2))
    d1 = (math.log(mean / d) + 0.5 * sigma * sigma) / sigma
    return mean * normal_cdf(d1) - d * normal_cdf(d1 - sigma)
