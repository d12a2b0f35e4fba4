"""Shared one-dimensional numerical routines: golden-section search and quadrature."""

import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from src.utils.errors import NumericError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

QUAD_EPSREL = 1e-9
QUAD_EPSABS = 1e-13
QUAD_LIMIT = 2**15


def golden_section_max(
    func: Callable[[np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    tol: float,
) -> tuple:
    """
    Golden-section search for the maximum of ``func`` on many brackets at once.

    Every bracket [lower_i, upper_i] is shrunk in lockstep until its width is at most
    ``tol``. ``func`` must accept and return arrays. The bracket endpoints are evaluated
    at the end so that maxima sitting on a boundary are not lost.

    Returns:
        tuple: (argmax array, max value array)
    """
    a = np.array(lower, dtype=float, ndmin=1)
    b = np.array(upper, dtype=float, ndmin=1)
    h = b - a
    widest = float(np.max(h)) if h.size else 0.0
    steps = 0
    if widest > tol:
        steps = int(math.ceil(math.log(tol / widest) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(steps):
        left = yc >= yd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        h = h * INV_PHI
        new_c = a + INV_PHI_SQUARE * h
        new_d = a + INV_PHI * h
        y_new = func(np.where(left, new_c, new_d))
        c, d, yc, yd = (
            np.where(left, new_c, d),
            np.where(left, c, new_d),
            np.where(left, y_new, yd),
            np.where(left, yc, y_new),
        )

    ya = func(a)
    yb = func(b)
    # Candidates ordered by position so ties resolve to the smallest x
    xs = np.stack([a, c, d, b])
    ys = np.stack([ya, yc, yd, yb])
    best = np.argmax(ys, axis=0)
    cols = np.arange(xs.shape[1])
    return xs[best, cols], ys[best, cols]


@lru_cache(maxsize=16)
def _legendre_rule(order: int) -> tuple:
    return leggauss(order)


def composite_gauss_legendre(
    lower: np.ndarray, upper: np.ndarray, panels: int = 12, order: int = 16
) -> tuple:
    """
    Nodes and weights of a composite Gauss–Legendre rule on each interval [lower_i, upper_i].

    Returns:
        tuple: (nodes, weights), both of shape (len(lower), panels * order)
    """
    t, w = _legendre_rule(order)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    edges = lower[:, None] + (upper - lower)[:, None] * np.linspace(0.0, 1.0, panels + 1)[None, :]
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    nodes = mid[:, :, None] + half[:, :, None] * t[None, None, :]
    weights = half[:, :, None] * w[None, None, :]
    n = lower.shape[0]
    return nodes.reshape(n, -1), weights.reshape(n, -1)


def adaptive_quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    points: Optional[Sequence[float]] = None,
    epsrel: float = QUAD_EPSREL,
) -> float:
    """
    Adaptive Gauss–Kronrod integral of ``func`` over [lower, upper], split at ``points``.

    Infinite limits are allowed. Raises NumericError when QUADPACK reports that the
    requested accuracy was not reached after the subdivision cap.
    """
    cuts = [lower]
    for p in sorted(points or []):
        if lower < p < upper:
            cuts.append(float(p))
    cuts.append(upper)

    total = 0.0
    for left, right in zip(cuts[:-1], cuts[1:]):
        if right <= left:
            continue
        result = quad(
            func,
            left,
            right,
            epsabs=QUAD_EPSABS,
            epsrel=epsrel,
            limit=QUAD_LIMIT,
            full_output=1,
        )
        value, abserr = result[0], result[1]
        if len(result) > 3 and abserr > max(100 * QUAD_EPSABS, 100 * epsrel * abs(value)):
            raise NumericError(
                "Quadrature did not converge",
                {"interval": (left, right), "value": value, "abserr": abserr,
                 "message": result[3]},
            )
        total += value
    return total
