"""
Pricing: find the atom with the largest reduced cost

    r(x) = w * f(x) - tau - sum_j lambda_j g_j(x)

where w is 1 (bound problem) or 0 (Phase I). Piecewise rational transforms are priced
exactly through their critical-point polynomials; other families search a cached grid and
refine the best local peaks by golden-section search.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.cg.columns import TransformedProblem
from src.cg.master import MasterSolution
from src.polyalg import Domain, PiecewiseFunction, global_max, linear_combination
from src.utils.numerics import golden_section_max

logger = logging.getLogger(__name__)

REFINE_WIDTH = 1e-10


class SubproblemPath(str, Enum):
    EXACT = "exact-polynomial"
    NUMERIC = "numeric-search"


@dataclass
class SubproblemResult:
    x_star: float
    reduced_cost: float
    path: SubproblemPath
    capped: bool = False


def reduced_cost_function(master: MasterSolution, problem: TransformedProblem) -> PiecewiseFunction:
    """r(x) as a piecewise rational function (exact transforms only)."""
    functions = [problem.target.exact] + [c.exact for c in problem.constraints]
    coefficients = [master.objective_weight * problem.sign] + [-lam for lam in master.duals]
    return linear_combination(functions, coefficients, constant=-master.tau)


def reduced_cost_values(master: MasterSolution, problem: TransformedProblem, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    objective = problem.objective_values(xs) if master.objective_weight else 0.0
    return master.reduced_costs(objective, problem.constraint_values(xs))


def _solve_exact(master: MasterSolution, problem: TransformedProblem) -> SubproblemResult:
    r = reduced_cost_function(master, problem)
    best = global_max(r, problem.domain)
    if best.unbounded or math.isinf(best.argmax):
        capped = global_max(r, problem.search_window)
        if best.unbounded:
            logger.debug(f"Reduced cost grows without bound; atom capped at {capped.argmax:g}")
        return SubproblemResult(capped.argmax, capped.value, SubproblemPath.EXACT, capped=True)
    return SubproblemResult(best.argmax, best.value, SubproblemPath.EXACT)


def _local_peaks(values: np.ndarray, count: int) -> np.ndarray:
    n = values.size
    left = np.concatenate([[-np.inf], values[:-1]])
    right = np.concatenate([values[1:], [-np.inf]])
    peaks = np.nonzero((values >= left) & (values >= right))[0]
    order = np.argsort(-values[peaks], kind="stable")
    return np.sort(peaks[order[:count]]) if n else peaks


def _search(
    master: MasterSolution,
    problem: TransformedProblem,
    xs: np.ndarray,
    values: np.ndarray,
    candidates: int,
) -> SubproblemResult:
    window = problem.search_window
    peaks = _local_peaks(values, candidates)
    lower = xs[np.maximum(peaks - 1, 0)]
    upper = xs[np.minimum(peaks + 1, xs.size - 1)]

    def r(points):
        return reduced_cost_values(master, problem, np.clip(points, window.lower, window.upper))

    tol = REFINE_WIDTH * window.scale
    arg, val = golden_section_max(r, lower, upper, tol)
    all_x = np.concatenate([xs[peaks], arg])
    all_v = np.concatenate([values[peaks], val])
    order = np.lexsort((all_x, -all_v))
    best = order[0]
    return SubproblemResult(float(all_x[best]), float(all_v[best]), SubproblemPath.NUMERIC)


def _solve_numeric(
    master: MasterSolution, problem: TransformedProblem, candidates: int
) -> SubproblemResult:
    xs, objective, columns = problem.grid()
    values = master.reduced_costs(objective if master.objective_weight else 0.0, columns)
    result = _search(master, problem, xs, values, candidates)
    if not math.isfinite(problem.domain.upper) and result.x_star >= xs[-1] - (xs[1] - xs[0]):
        result.capped = True
    return result


def solve_subproblem(
    master: MasterSolution,
    problem: TransformedProblem,
    candidates: int = 8,
    around: Optional[float] = None,
) -> SubproblemResult:
    """
    Maximize the reduced cost over the atom domain.

    ``around`` requests a finer local grid centred on that point (used when the regular
    search returns an atom already in the master).
    """
    if around is not None:
        return local_search(master, problem, around, candidates)
    if problem.is_exact:
        return _solve_exact(master, problem)
    return _solve_numeric(master, problem, candidates)


def local_search(
    master: MasterSolution, problem: TransformedProblem, center: float, candidates: int = 8
) -> SubproblemResult:
    """Dense grid search on a few coarse grid cells around ``center``."""
    window = problem.search_window
    spacing = window.width / max(problem.grid_points - 1, 1) if window.is_bounded else 1.0
    local = Domain(max(window.lower, center - 4 * spacing), min(window.upper, center + 4 * spacing))
    xs = np.linspace(local.lower, local.upper, problem.grid_points)
    values = reduced_cost_values(master, problem, xs)
    result = _search(master, problem, xs, values, candidates)
    result.path = SubproblemPath.EXACT if problem.is_exact else SubproblemPath.NUMERIC
    return result
