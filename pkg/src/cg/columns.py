"""Transformed problem data: objective and constraint values of candidate atoms."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.mixtures import TransformedFunction, atom_domain, transform
from src.model import ProblemSpec, Sense
from src.polyalg import Domain

logger = logging.getLogger(__name__)


@dataclass
class TransformedProblem:
    """
    A ProblemSpec with the mixture transform applied once to the target and every g_j.

    Objective values are in maximization form: the target is multiplied by ``sign``
    (-1 for a lower bound).
    """

    spec: ProblemSpec
    sign: float
    target: TransformedFunction
    constraints: List[TransformedFunction]
    domain: Domain
    search_cap: float
    grid_points: int = 2048
    force_numeric: bool = False
    _grid: Optional[tuple] = field(default=None, repr=False)

    @classmethod
    def build(
        cls, spec: ProblemSpec, grid_points: int = 2048, force_numeric: bool = False
    ) -> "TransformedProblem":
        scale = spec.scale
        target = transform(spec.target, spec.family, scale)
        constraints = [transform(c.g, spec.family, scale) for c in spec.constraints]
        sign = 1.0 if spec.sense == Sense.UPPER else -1.0
        problem = cls(
            spec=spec,
            sign=sign,
            target=target,
            constraints=constraints,
            domain=atom_domain(spec),
            search_cap=spec.effective_search_cap,
            grid_points=grid_points,
            force_numeric=force_numeric,
        )
        logger.debug(
            f"Transformed problem: {spec.describe()}, "
            f"{'exact' if problem.is_exact else 'numeric'} subproblem, cap {problem.search_cap:g}"
        )
        return problem

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def sigma_lo(self) -> np.ndarray:
        return np.array([c.sigma_lo for c in self.spec.constraints])

    @property
    def sigma_hi(self) -> np.ndarray:
        return np.array([c.sigma_hi for c in self.spec.constraints])

    @property
    def scale(self) -> float:
        return self.spec.scale

    @property
    def is_exact(self) -> bool:
        if self.force_numeric:
            return False
        return self.target.is_piecewise_exact and all(
            c.is_piecewise_exact for c in self.constraints
        )

    @property
    def search_window(self) -> Domain:
        upper = self.domain.upper if math.isfinite(self.domain.upper) else self.search_cap
        return Domain(self.domain.lower, upper)

    def objective_values(self, xs) -> np.ndarray:
        return self.sign * self.target.values(xs)

    def constraint_values(self, xs) -> np.ndarray:
        """Array of shape (m, len(xs))."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return np.vstack([c.values(xs) for c in self.constraints])

    def grid(self) -> tuple:
        """(xs, objective, constraints) on the uniform search grid, computed once."""
        if self._grid is None:
            window = self.search_window
            xs = np.linspace(window.lower, window.upper, self.grid_points)
            self._grid = (xs, self.objective_values(xs), self.constraint_values(xs))
        return self._grid
