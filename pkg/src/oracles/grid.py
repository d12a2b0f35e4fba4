"""
Brute-force bound: one LP over a dense fixed grid of atoms.

The LP is solved with HiGHS so the reference does not share code with the column
generation master.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from src.cg import TransformedProblem
from src.lpcore import LpStatus
from src.model import ProblemSpec, Sense
from src.utils.errors import NumericError, ValidationError

logger = logging.getLogger(__name__)

MIN_GRID = 101


@dataclass(frozen=True)
class GridOracleConfig:
    n: int = 20001
    clip: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.n < MIN_GRID:
            raise ValidationError(f"Grid oracle needs n >= {MIN_GRID}, got {self.n}", field="n")
        if self.clip is not None:
            lo, hi = self.clip
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValidationError(f"Clip window must be finite, got {self.clip}", field="clip")


@dataclass
class GridBound:
    status: LpStatus
    bound: float
    atoms: np.ndarray
    weights: np.ndarray


def solve_grid_lp(spec: ProblemSpec, cfg: Optional[GridOracleConfig] = None) -> GridBound:
    """
    Master LP over ``cfg.n`` evenly spaced atoms in the clip window (default: the support
    capped at the spec's search cap).
    """
    cfg = cfg or GridOracleConfig()
    problem = TransformedProblem.build(spec)
    lo, hi = cfg.clip if cfg.clip is not None else (
        problem.search_window.lower,
        problem.search_window.upper,
    )
    lo, hi = max(lo, problem.domain.lower), min(hi, problem.domain.upper)
    xs = np.linspace(lo, hi, cfg.n)

    objective = problem.target.values(xs)
    columns = problem.constraint_values(xs)
    a_ub = np.vstack([-columns, columns])
    b_ub = np.concatenate([-problem.sigma_lo, problem.sigma_hi])
    sign = 1.0 if spec.sense == Sense.UPPER else -1.0
    res = linprog(
        c=-sign * objective,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=np.ones((1, cfg.n)),
        b_eq=np.array([1.0]),
        bounds=(0, None),
        method="highs",
    )
    if res.status == 2:
        logger.info(f"Grid LP infeasible on [{lo:g}, {hi:g}] with n = {cfg.n}")
        return GridBound(LpStatus.INFEASIBLE, float("nan"), xs, np.zeros(0))
    if res.status != 0:
        raise NumericError("Grid LP failed", {"status": res.status, "message": res.message})

    bound = -sign * res.fun
    logger.debug(f"Grid LP bound {bound:.12g} (n = {cfg.n}, window [{lo:g}, {hi:g}])")
    return GridBound(LpStatus.OPTIMAL, float(bound), xs, res.x)


def grid_lp_bound(spec: ProblemSpec, cfg: Optional[GridOracleConfig] = None) -> float:
    """Objective of ``solve_grid_lp``; nan when the grid admits no feasible weights."""
    return solve_grid_lp(spec, cfg).bound
