"""
Expectations of a base function under the mixture components.

For a base function h and component H_x, ``transform`` builds x -> E_{H_x}[h(U)]:

    dirac               identity
    uniform_zero        exact piecewise rational  (F(x) - F(0)) / x
    khintchine_uniform  exact piecewise rational  (F(x) - F(M)) / (x - M)
    lognormal           closed-form partial moments of every polynomial piece
    smoothed_uniform    logistic-smoothed antiderivative (uniform convolved with logistic)

where F is an antiderivative of h. Every transform also carries the adaptive-quadrature
evaluator ``numeric`` as a reference.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.special import ndtr, zeta

from src.mixtures.components import (
    component_pdf,
    lognormal_param_arrays,
    lognormal_params,
    logistic_pdf,
)
from src.model import FamilyVariant, MixtureFamily
from src.polyalg import (
    Piece,
    PiecewiseFunction,
    Polynomial,
    antiderivative,
    divide_by_linear,
)
from src.utils.numerics import adaptive_quad, composite_gauss_legendre

logger = logging.getLogger(__name__)

# Logistic half-window in units of 1/eta; the neglected tail mass is below e^-36
LOGISTIC_HALF_WIDTH = 36.0
# Smoothed-uniform tails are cut where the density drops below 1e-14 of its peak
SMOOTHED_TAIL = math.log(1e14)
# Points closer than this (relative to scale) to the anchor use the derivative form
ANCHOR_GAP = 1e-6


@dataclass
class TransformedFunction:
    """x -> E_{H_x}[base(U)] for one family."""

    family: MixtureFamily
    base: PiecewiseFunction
    exact: Optional[PiecewiseFunction] = None
    closed_form: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def is_piecewise_exact(self) -> bool:
        return self.exact is not None

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.exact is not None:
            return self.exact.evaluate(xs)
        if self.closed_form is not None:
            return np.asarray(self.closed_form(np.atleast_1d(xs)), dtype=float).reshape(xs.shape)
        return np.vectorize(self.numeric, otypes=[float])(xs)

    def __call__(self, x: float) -> float:
        return float(self.values(np.array([x]))[0])

    def numeric(self, x: float) -> float:
        """Reference value of E_{H_x}[base] by adaptive quadrature."""
        family = self.family
        x = float(x)
        if family.variant == FamilyVariant.DIRAC:
            return self.base.eval(x)

        if family.variant == FamilyVariant.LOGNORMAL:
            params = lognormal_params(x, family.alpha)
            base = self.base.extended()
            cuts = [
                (math.log(b) - params.mu_x) / params.sigma_x
                for b in base.breakpoints[1:-1]
                if b > 0
            ]

            def integrand(t):
                u = math.exp(params.mu_x + params.sigma_x * t)
                return base.eval(u) * math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)

            return adaptive_quad(integrand, -math.inf, math.inf, cuts)

        anchor = family.anchor
        lo, hi = min(anchor, x), max(anchor, x)
        if family.variant == FamilyVariant.SMOOTHED_UNIFORM:
            base = self.base.extended()
            tail = SMOOTHED_TAIL / family.eta
            lo, hi = lo - tail, hi + tail
        else:
            base = self.base
            if hi - lo <= 1e-12 * max(1.0, abs(hi)):
                return base.eval(anchor)

        def weighted(u):
            return base.eval(u) * component_pdf(family, x, u)

        points = [b for b in base.breakpoints if lo < b < hi] + [anchor, x]
        return adaptive_quad(weighted, lo, hi, points)


def _split_at(fn: PiecewiseFunction, point: float) -> PiecewiseFunction:
    if point in fn.breakpoints or not fn.breakpoints[0] < point < fn.breakpoints[-1]:
        return fn
    idx = fn.piece_index(point)
    bps = fn.breakpoints[: idx + 1] + (point,) + fn.breakpoints[idx + 1 :]
    pieces = fn.pieces[: idx + 1] + (fn.pieces[idx],) + fn.pieces[idx + 1 :]
    return PiecewiseFunction(bps, pieces)


def anchored_antiderivative(fn: PiecewiseFunction, anchor: float) -> PiecewiseFunction:
    """
    Continuous piecewise polynomial F with F' = fn and F(anchor) = 0.

    ``anchor`` is made a breakpoint. On every piece F = G_k(x) - G_k(r_k) + F(r_k), with
    r_k the piece end nearest the anchor.
    """
    if not fn.is_polynomial:
        raise ValueError("anchored_antiderivative needs polynomial pieces")
    fn = _split_at(fn, anchor)
    bps = fn.breakpoints
    anchor_idx = bps.index(anchor) if anchor in bps else None
    if anchor_idx is None:
        raise ValueError(f"Anchor {anchor} outside support {fn.support}")

    prims: List[Optional[Polynomial]] = [None] * len(fn.pieces)
    value_at = {anchor: 0.0}
    for k in range(anchor_idx, len(fn.pieces)):
        left, right = bps[k], bps[k + 1]
        g = antiderivative(fn.pieces[k].numerator)
        prims[k] = g - float(g(left)) + value_at[left]
        if math.isfinite(right):
            value_at[right] = float(prims[k](right))
    for k in range(anchor_idx - 1, -1, -1):
        left, right = bps[k], bps[k + 1]
        g = antiderivative(fn.pieces[k].numerator)
        prims[k] = g - float(g(right)) + value_at[right]
        if math.isfinite(left):
            value_at[left] = float(prims[k](left))
    return PiecewiseFunction.from_polynomials(bps, prims)


def _uniform_exact(base: PiecewiseFunction, anchor: float) -> PiecewiseFunction:
    prim = anchored_antiderivative(base, anchor)
    bps = prim.breakpoints
    pieces = []
    for k, piece in enumerate(prim.pieces):
        left, right = bps[k], bps[k + 1]
        limit = float(base.eval(anchor))
        if left == anchor or right == anchor:
            # F vanishes at the anchor, so the division is exact
            pieces.append(Piece(divide_by_linear(piece.numerator, anchor)))
        else:
            pieces.append(Piece(piece.numerator, pole=anchor, limit=limit))
    return PiecewiseFunction(bps, tuple(pieces))


def _normal_mass(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Phi(hi) - Phi(lo), using upper tails when both arguments are positive."""
    return np.where(lo > 0, ndtr(-lo) - ndtr(-hi), ndtr(hi) - ndtr(lo))


def _lognormal_closed_form(base: PiecewiseFunction, alpha: float):
    base = base.extended()
    bps = base.breakpoints
    log_bps = [math.log(b) if b > 0 else -math.inf for b in bps]
    log_bps[-1] = math.inf

    def evaluate(xs: np.ndarray) -> np.ndarray:
        mu, sigma = lognormal_param_arrays(xs, alpha)
        total = np.zeros_like(mu)
        for k, piece in enumerate(base.pieces):
            lo_log, hi_log = log_bps[k], log_bps[k + 1]
            if hi_log == -math.inf:
                continue
            for i, a in enumerate(piece.numerator.coefficients):
                if a == 0.0:
                    continue
                shift = mu + i * sigma * sigma
                with np.errstate(invalid="ignore"):
                    z_lo = (lo_log - shift) / sigma
                    z_hi = (hi_log - shift) / sigma
                moment = np.exp(i * mu + 0.5 * (i * sigma) ** 2)
                total += a * moment * _normal_mass(z_lo, z_hi)
        return total

    return evaluate


def _logistic_moments(eta: float, order: int) -> np.ndarray:
    """Raw moments E[L^j], j = 0..order, of the logistic with scale 1/eta."""
    moments = np.zeros(order + 1)
    moments[0] = 1.0
    for j in range(2, order + 1, 2):
        k = j // 2
        moments[j] = (2.0 - 2.0 ** (2 - 2 * k)) * math.factorial(j) * zeta(j) / eta**j
    return moments


def _smoothed_polynomial(poly: Polynomial, v: np.ndarray, moments: np.ndarray) -> np.ndarray:
    """E[poly(v + L)] for the logistic L."""
    total = np.zeros_like(v)
    for i, a in enumerate(poly.coefficients):
        if a == 0.0:
            continue
        for j in range(0, i + 1, 2):
            total += a * math.comb(i, j) * moments[j] * v ** (i - j)
    return total


class _LogisticSmoother:
    """
    v -> E[h(v + L)] for a piecewise polynomial h written as
    P_0 + sum_k D_k(u) * 1{u >= t_k}.
    """

    def __init__(self, fn: PiecewiseFunction, eta: float):
        polys = [p.numerator for p in fn.pieces]
        self.eta = eta
        self.head = polys[0]
        self.jumps: List[Tuple[float, Polynomial]] = [
            (t, polys[k + 1] - polys[k])
            for k, t in enumerate(fn.breakpoints[1:-1])
            if polys[k + 1] != polys[k]
        ]
        order = max(p.degree for p in polys)
        self.moments = _logistic_moments(eta, order)
        self.half_width = LOGISTIC_HALF_WIDTH / eta

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        total = _smoothed_polynomial(self.head, v, self.moments)
        for t, diff in self.jumps:
            full = t <= v - self.half_width
            if np.any(full):
                total[full] += _smoothed_polynomial(diff, v[full], self.moments)
            partial = ~full & (t < v + self.half_width)
            if np.any(partial):
                vp = v[partial]
                nodes, weights = composite_gauss_legendre(
                    np.full(vp.shape, t), vp + self.half_width
                )
                density = logistic_pdf(self.eta, nodes - vp[:, None])
                total[partial] += np.sum(weights * diff(nodes) * density, axis=1)
        return total


def _smoothed_uniform_closed_form(base: PiecewiseFunction, mode: float, eta: float, scale: float):
    base = base.extended()
    psi = _LogisticSmoother(anchored_antiderivative(base, mode), eta)
    dpsi = _LogisticSmoother(base, eta)
    psi_mode = float(psi(np.array([mode]))[0])
    gap = ANCHOR_GAP * scale

    def evaluate(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.empty_like(xs)
        near = np.abs(xs - mode) <= gap
        if np.any(~near):
            far = xs[~near]
            out[~near] = (psi(far) - psi_mode) / (far - mode)
        if np.any(near):
            out[near] = dpsi(0.5 * (xs[near] + mode))
        return out

    return evaluate


def transform(
    base: PiecewiseFunction, family: MixtureFamily, scale: float = 1.0
) -> TransformedFunction:
    """
    E_{H_x}[base] as a function of x for ``family``.

    ``scale`` is the problem scale; it sets the neighbourhood of the mode in which the
    smoothed-uniform transform switches to its derivative form.
    """
    variant = family.variant
    if variant == FamilyVariant.DIRAC:
        return TransformedFunction(family, base, exact=base)

    if not base.is_polynomial:
        logger.debug(f"Rational base function: {variant.value} transform falls back to quadrature")
        return TransformedFunction(family, base)

    if variant in (FamilyVariant.UNIFORM_ZERO, FamilyVariant.KHINTCHINE_UNIFORM):
        return TransformedFunction(family, base, exact=_uniform_exact(base, family.anchor))
    if variant == FamilyVariant.LOGNORMAL:
        return TransformedFunction(
            family, base, closed_form=_lognormal_closed_form(base, family.alpha)
        )
    return TransformedFunction(
        family,
        base,
        closed_form=_smoothed_uniform_closed_form(base, family.mode, family.eta, scale),
    )
