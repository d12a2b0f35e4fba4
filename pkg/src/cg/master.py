"""
Master problem over a finite atom set.

    max  sum_x p_x f(x)
    s.t. sum_x p_x g_j(x) >= sigma_lo_j     (one row)
         sum_x p_x g_j(x) <= sigma_hi_j     (one row)
         sum_x p_x = 1,  p >= 0

The Phase-I variant adds scaled violation columns for every moment row and maximizes
minus their weighted sum.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List

import numpy as np

from src.cg.columns import TransformedProblem
from src.lpcore import LpProblem, LpStatus, RowType, solve_lp
from src.utils.errors import MasterInfeasibleError, NumericError

logger = logging.getLogger(__name__)


class AtomSet:
    """Distinct atoms in insertion order together with their cached columns."""

    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self._atoms: List[float] = []
        self._objective: List[float] = []
        self._columns: List[np.ndarray] = []

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[float]:
        return iter(self._atoms)

    @property
    def atoms(self) -> np.ndarray:
        return np.array(self._atoms)

    @property
    def objective(self) -> np.ndarray:
        return np.array(self._objective)

    @property
    def columns(self) -> np.ndarray:
        """Constraint values, shape (m, n_atoms)."""
        return np.column_stack(self._columns)

    def nearest(self, x: float) -> float:
        return min(self._atoms, key=lambda a: abs(a - x))

    def contains(self, x: float) -> bool:
        return any(abs(a - x) <= self.tolerance for a in self._atoms)

    def add(self, x: float, problem: TransformedProblem) -> bool:
        """Add ``x`` unless it duplicates an existing atom; returns whether it was added."""
        if self.contains(x):
            return False
        self._atoms.append(float(x))
        self._objective.append(float(problem.objective_values(np.array([x]))[0]))
        self._columns.append(problem.constraint_values(np.array([x]))[:, 0])
        return True

    def add_many(self, xs, problem: TransformedProblem) -> int:
        fresh = []
        for x in xs:
            if not self.contains(x) and not any(abs(x - f) <= self.tolerance for f in fresh):
                fresh.append(float(x))
        if not fresh:
            return 0
        values = problem.constraint_values(np.array(fresh))
        objective = problem.objective_values(np.array(fresh))
        for i, x in enumerate(fresh):
            self._atoms.append(x)
            self._objective.append(float(objective[i]))
            self._columns.append(values[:, i])
        return len(fresh)

    def keep(self, mask: np.ndarray):
        idx = np.nonzero(mask)[0]
        self._atoms = [self._atoms[i] for i in idx]
        self._objective = [self._objective[i] for i in idx]
        self._columns = [self._columns[i] for i in idx]


@dataclass
class MasterSolution:
    """
    Optimal master weights and duals in maximization form.

    ``duals`` holds the net dual lambda_j = rho_lo_j + rho_hi_j of each constraint pair, so
    that the reduced cost of a column x is f(x) - tau - sum_j lambda_j g_j(x).
    """

    atoms: np.ndarray
    weights: np.ndarray
    objective: float
    duals: np.ndarray
    rho_lo: np.ndarray
    rho_hi: np.ndarray
    tau: float
    objective_weight: float = 1.0
    basis: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    def basic_mask(self) -> np.ndarray:
        """True for atoms whose column is basic in the final master tableau."""
        mask = np.zeros(self.atoms.size, dtype=bool)
        mask[self.basis] = True
        return mask

    def reduced_costs(self, objective: np.ndarray, columns: np.ndarray) -> np.ndarray:
        return self.objective_weight * objective - self.tau - self.duals @ columns


def _moment_rows(problem: TransformedProblem, columns: np.ndarray) -> tuple:
    m = problem.m
    n = columns.shape[1]
    rows = np.zeros((2 * m + 1, n))
    rows[0 : 2 * m : 2] = columns
    rows[1 : 2 * m : 2] = columns
    rows[-1] = 1.0
    types = [RowType.GE, RowType.LE] * m + [RowType.EQ]
    rhs = np.empty(2 * m + 1)
    rhs[0 : 2 * m : 2] = problem.sigma_lo
    rhs[1 : 2 * m : 2] = problem.sigma_hi
    rhs[-1] = 1.0
    return rows, types, rhs


def _split_duals(duals: np.ndarray, m: int) -> tuple:
    rho_lo = duals[0 : 2 * m : 2]
    rho_hi = duals[1 : 2 * m : 2]
    return rho_lo, rho_hi, rho_lo + rho_hi, float(duals[-1])


def solve_master(
    atoms: AtomSet,
    problem: TransformedProblem,
    pivot_tolerance: float = 1e-9,
    feasibility_tolerance: float = 1e-8,
) -> MasterSolution:
    """
    Raises:
        MasterInfeasibleError: no weights on ``atoms`` satisfy the constraints
        NumericError: the LP reports an unbounded objective
    """
    if not len(atoms):
        raise MasterInfeasibleError("Master problem has no atoms")
    rows, types, rhs = _moment_rows(problem, atoms.columns)
    lp = LpProblem(atoms.objective, rows, types, rhs)
    solution = solve_lp(lp, pivot_tolerance, feasibility_tolerance)
    if solution.status == LpStatus.INFEASIBLE:
        raise MasterInfeasibleError(
            f"Master infeasible over {len(atoms)} atoms (residual {solution.infeasibility:.3e})"
        )
    if solution.status == LpStatus.UNBOUNDED:
        raise NumericError("Master LP reported unbounded over the probability simplex")
    rho_lo, rho_hi, net, tau = _split_duals(solution.duals, problem.m)
    return MasterSolution(
        atoms=atoms.atoms,
        weights=solution.x,
        objective=solution.objective,
        duals=net,
        rho_lo=rho_lo,
        rho_hi=rho_hi,
        tau=tau,
        basis=np.array([c for c in solution.basis if c < len(atoms)], dtype=int),
    )


@dataclass
class PhaseOneSolution:
    master: MasterSolution
    violation: float


def solve_phase_one_master(
    atoms: AtomSet,
    problem: TransformedProblem,
    pivot_tolerance: float = 1e-9,
    feasibility_tolerance: float = 1e-8,
) -> PhaseOneSolution:
    """
    Minimize the scaled moment violation over ``atoms``.

    Each row gets its own violation column with cost 1 / size_j, where size_j is the
    magnitude of the row's bound. The returned master has objective weight 0, so its
    reduced costs price columns by violation reduction alone.
    """
    m = problem.m
    columns = atoms.columns
    n = columns.shape[1]
    rows, types, rhs = _moment_rows(problem, columns)
    size = np.maximum(1.0, np.abs(rhs[: 2 * m]))
    artificial = np.zeros((2 * m + 1, 2 * m))
    for r in range(2 * m):
        artificial[r, r] = 1.0 if types[r] == RowType.GE else -1.0
    objective = np.concatenate([np.zeros(n), -1.0 / size])
    lp = LpProblem(objective, np.hstack([rows, artificial]), types, rhs)
    solution = solve_lp(lp, pivot_tolerance, feasibility_tolerance)
    if solution.status != LpStatus.OPTIMAL:
        raise NumericError(f"Phase-one master ended {solution.status.value}")
    rho_lo, rho_hi, net, tau = _split_duals(solution.duals, m)
    master = MasterSolution(
        atoms=atoms.atoms,
        weights=solution.x[:n],
        objective=solution.objective,
        duals=net,
        rho_lo=rho_lo,
        rho_hi=rho_hi,
        tau=tau,
        objective_weight=0.0,
    )
    return PhaseOneSolution(master, violation=-solution.objective)
