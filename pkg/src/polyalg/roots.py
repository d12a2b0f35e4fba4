"""
Real roots of univariate polynomials.

Degrees up to four are seeded from closed forms (quadratic formula, Cardano with the
trigonometric branch, Ferrari); higher degrees take the real parts of the companion-matrix
eigenvalues. Every seed is polished by Newton iteration before it is returned.
"""

import logging
import math
from typing import List, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.polyalg.domain import Domain
from src.polyalg.polynomial import Polynomial
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-10
NEWTON_MAX_STEPS = 60
IMAG_TOLERANCE = 1e-7
MERGE_TOLERANCE = 1e-9


def _quadratic(a: float, b: float, c: float) -> List[float]:
    if a == 0.0:
        return [] if b == 0.0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        # Treat rounding-level negatives as a double root
        if disc < -1e-12 * (b * b + abs(4.0 * a * c)):
            return []
        disc = 0.0
    root = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(root, b))
    if q == 0.0:
        return [0.0, 0.0]
    return [q / a, c / q]


def _cubic(a: float, b: float, c: float, d: float) -> List[float]:
    if a == 0.0:
        return _quadratic(b, c, d)
    A, B, C = b / a, c / a, d / a
    shift = A / 3.0
    p = B - A * A / 3.0
    q = 2.0 * A**3 / 27.0 - A * B / 3.0 + C
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    if abs(p) < 1e-14 * max(1.0, A * A, abs(B)):
        return [float(np.cbrt(-q)) - shift]
    if disc > 0.0:
        root = math.sqrt(disc)
        t = float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))
        return [t - shift]

    # Three real roots (p < 0 here)
    r = 2.0 * math.sqrt(-p / 3.0)
    cos_arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
    phi = math.acos(max(-1.0, min(1.0, cos_arg)))
    return [r * math.cos(phi / 3.0 - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]


def _quartic(a: float, b: float, c: float, d: float, e: float) -> List[float]:
    if a == 0.0:
        return _cubic(b, c, d, e)
    B, C, D, E = b / a, c / a, d / a, e / a
    shift = B / 4.0
    # Depressed quartic y^4 + p y^2 + q y + r with x = y - B/4
    p = C - 3.0 * B * B / 8.0
    q = D - B * C / 2.0 + B**3 / 8.0
    r = E - B * D / 4.0 + B * B * C / 16.0 - 3.0 * B**4 / 256.0

    scale = max(1.0, abs(p), abs(r), B * B)
    if abs(q) <= 1e-14 * scale**1.5:
        ys = []
        for z in _quadratic(1.0, p, r):
            if z >= 0.0:
                ys.extend([math.sqrt(z), -math.sqrt(z)])
            elif z > -1e-12 * scale:
                ys.append(0.0)
        return [y - shift for y in ys]

    # Resolvent cubic; its largest real root is positive whenever q != 0
    z = max(_cubic(1.0, 2.0 * p, p * p - 4.0 * r, -q * q))
    if z <= 0.0:
        z = max(z, 0.0) + 1e-300
    s = math.sqrt(z)
    ys = _quadratic(1.0, s, (p + z - q / s) / 2.0) + _quadratic(1.0, -s, (p + z + q / s) / 2.0)
    return [y - shift for y in ys]


def _closed_form_seeds(p: Polynomial) -> List[float]:
    coeffs = list(p.coefficients)
    if p.degree == 1:
        return [-coeffs[0] / coeffs[1]]
    if p.degree == 2:
        return _quadratic(coeffs[2], coeffs[1], coeffs[0])
    if p.degree == 3:
        return _cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0])
    return _quartic(coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0])


def _companion_seeds(p: Polynomial) -> List[float]:
    roots = npoly.polyroots(p.coefficients)
    return [float(z.real) for z in roots if abs(z.imag) <= IMAG_TOLERANCE * (1.0 + abs(z))]


def newton_polish(p: Polynomial, seed: float, dp: Optional[Polynomial] = None) -> float:
    """Refine ``seed`` by Newton steps, keeping the iterate with the smallest residual."""
    dp = dp or p.derivative()
    x = float(seed)
    best_x, best_res = x, abs(float(p(x)))
    for _ in range(NEWTON_MAX_STEPS):
        if best_res <= RESIDUAL_TOLERANCE * p.eval_scale(best_x):
            break
        slope = float(dp(x))
        if slope == 0.0 or not math.isfinite(slope):
            break
        x_next = x - float(p(x)) / slope
        if not math.isfinite(x_next) or x_next == x:
            break
        x = x_next
        res = abs(float(p(x)))
        if res < best_res:
            best_x, best_res = x, res
    return best_x


def roots_real(p: Polynomial, dom: Optional[Domain] = None) -> List[float]:
    """
    All real roots of ``p`` inside ``dom``, ascending and without duplicates.

    Raises:
        DomainError: if ``p`` is identically zero
    """
    if p.is_zero:
        raise DomainError("roots_real is undefined for the zero polynomial")
    if p.degree == 0:
        return []
    dom = dom or Domain()

    seeds = _closed_form_seeds(p) if p.degree <= 4 else _companion_seeds(p)
    dp = p.derivative()
    polished = sorted(newton_polish(p, s, dp) for s in seeds if math.isfinite(s))

    roots: List[float] = []
    for r in polished:
        if roots and abs(r - roots[-1]) <= MERGE_TOLERANCE * (1.0 + abs(r)):
            continue
        slack = 1e-12 * (1.0 + abs(r))
        if dom.contains(r, tol=slack):
            roots.append(min(max(r, dom.lower), dom.upper))
    return roots
