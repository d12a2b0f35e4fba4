"""
Worst/best-case mixture distributions: density, CDF, unimodality and tabular export.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.cg import BoundResult
from src.mixtures import component_cdf, component_pdf, component_window
from src.model import MixtureFamily
from src.utils.errors import DomainError, UnsupportedOperationError, ValidationError

logger = logging.getLogger(__name__)

UNIMODALITY_GRID = 4096
PLATEAU_TOLERANCE = 1e-9
FORMAT_DENSITY = "u,pdf,cdf"
FORMAT_ATOMS = "atom,weight"


@dataclass(frozen=True)
class MixtureDistribution:
    """sum_x p_x H_x for the atoms and weights of a bound result."""

    family: MixtureFamily
    atoms: np.ndarray
    weights: np.ndarray
    window: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.shape != weights.shape or atoms.size == 0:
            raise ValidationError("Atoms and weights must be non-empty and of equal length")
        if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > 1e-9:
            raise ValidationError(f"Weights must be >= 0 and sum to 1, got sum {weights.sum()}")
        order = np.argsort(atoms)
        object.__setattr__(self, "atoms", atoms[order])
        object.__setattr__(self, "weights", np.clip(weights[order], 0.0, None))
        if self.window is None:
            object.__setattr__(self, "window", self._default_window())

    @classmethod
    def from_result(cls, result: BoundResult) -> "MixtureDistribution":
        return cls(result.family, result.atoms, result.weights)

    def _default_window(self) -> Tuple[float, float]:
        bounds = [component_window(self.family, float(x)) for x in self.atoms]
        return min(b[0] for b in bounds), max(b[1] for b in bounds)

    @property
    def mean(self) -> float:
        return float(self.weights @ self.atoms)


def mixture_pdf(dist: MixtureDistribution, u):
    """
    Mixture density at u. Degenerate uniform components (point masses) are left out.

    Raises:
        UnsupportedOperationError: for the Dirac family
    """
    if not dist.family.has_density:
        raise UnsupportedOperationError("Dirac mixtures have no density")
    u = np.asarray(u, dtype=float)
    total = np.zeros_like(u)
    for x, p in zip(dist.atoms, dist.weights):
        if p > 0:
            total = total + p * component_pdf(dist.family, float(x), u)
    return float(total) if total.ndim == 0 else total


def mixture_cdf(dist: MixtureDistribution, u):
    u = np.asarray(u, dtype=float)
    total = np.zeros_like(u)
    for x, p in zip(dist.atoms, dist.weights):
        if p > 0:
            total = total + p * component_cdf(dist.family, float(x), u)
    total = np.clip(total, 0.0, 1.0)
    return float(total) if total.ndim == 0 else total


def _evaluation_grid(dist: MixtureDistribution, n_points: int) -> np.ndarray:
    lo, hi = dist.window
    if not hi > lo:
        raise DomainError(f"Degenerate evaluation window [{lo}, {hi}]")
    return np.linspace(lo, hi, n_points)


def count_modes(values: np.ndarray) -> int:
    """Strict local maxima after merging plateaus within PLATEAU_TOLERANCE of the peak."""
    peak = float(np.max(values))
    if peak <= 0:
        return 0
    tol = PLATEAU_TOLERANCE * peak
    levels = [float(values[0])]
    for v in values[1:]:
        if abs(v - levels[-1]) > tol:
            levels.append(float(v))
    levels = np.array(levels)
    if levels.size == 1:
        return 1
    left = np.concatenate([[-np.inf], levels[:-1]])
    right = np.concatenate([levels[1:], [-np.inf]])
    return int(np.sum((levels > left) & (levels > right)))


def is_unimodal(dist: MixtureDistribution, grid_points: int = UNIMODALITY_GRID) -> bool:
    values = mixture_pdf(dist, _evaluation_grid(dist, grid_points))
    modes = count_modes(values)
    logger.debug(f"{dist.family}: {modes} mode(s) on a {grid_points}-point grid")
    return modes == 1


def export_distribution(dist: MixtureDistribution, n_points: int) -> pd.DataFrame:
    """
    Table of (u, pdf, cdf) on an even grid over the window, or (atom, weight) rows for
    Dirac mixtures. ``df.attrs["format"]`` names the layout.
    """
    if n_points < 2:
        raise ValidationError(f"n_points must be >= 2, got {n_points}", field="points")
    if not dist.family.has_density:
        table = pd.DataFrame({"atom": dist.atoms, "weight": dist.weights})
        table.attrs["format"] = FORMAT_ATOMS
        return table
    u = _evaluation_grid(dist, n_points)
    cdf = np.maximum.accumulate(mixture_cdf(dist, u))
    table = pd.DataFrame({"u": u, "pdf": mixture_pdf(dist, u), "cdf": cdf})
    table.attrs["format"] = FORMAT_DENSITY
    return table
