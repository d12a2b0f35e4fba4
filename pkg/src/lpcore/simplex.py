"""
Dense two-phase primal simplex with dual values.

Problems are stated as maximize c @ x subject to rows of type <=, >= or = and x >= 0.
Rows are equilibrated and flipped to non-negative right-hand sides before the tableau is
built; duals are mapped back to the caller's rows, so for a maximization the dual of a
<= row is >= 0, of a >= row is <= 0, and of an = row is free.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from src.utils.errors import NumericError

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-9
FEASIBILITY_TOLERANCE = 1e-8
BLAND_FACTOR = 100


class RowType(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpProblem:
    """maximize objective @ x  s.t.  rows @ x (row_types) rhs,  x >= 0."""

    objective: np.ndarray
    rows: np.ndarray
    row_types: List[RowType]
    rhs: np.ndarray

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        self.rhs = np.asarray(self.rhs, dtype=float).ravel()
        self.row_types = [RowType(t) for t in self.row_types]
        if self.rows.size == 0:
            self.rows = np.zeros((0, self.objective.size))
        if self.rows.shape[1] != self.objective.size:
            raise ValueError(
                f"Rows have {self.rows.shape[1]} columns, objective has {self.objective.size}"
            )
        if not (self.rows.shape[0] == self.rhs.size == len(self.row_types)):
            raise ValueError("rows, rhs and row_types must have the same length")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_cols(self) -> int:
        return self.objective.size


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective: float
    duals: np.ndarray
    basis: List[int] = field(default_factory=list)
    infeasibility: float = 0.0
    pivots: int = 0


@dataclass
class PhaseOneResult:
    feasible: bool
    x: np.ndarray
    residual: float


class DenseSimplex:
    """Single-use solver instance for one LpProblem."""

    def __init__(
        self,
        lp: LpProblem,
        pivot_tolerance: float = PIVOT_TOLERANCE,
        feasibility_tolerance: float = FEASIBILITY_TOLERANCE,
    ):
        self.lp = lp
        self.pivot_tol = pivot_tolerance
        self.feas_tol = feasibility_tolerance
        self.pivots = 0
        self._build()

    def _build(self):
        lp = self.lp
        m, n = lp.n_rows, lp.n_cols
        row_scale = np.max(np.abs(lp.rows), axis=1) if n else np.ones(m)
        row_scale = np.where(row_scale > 0, row_scale, 1.0)
        A = lp.rows / row_scale[:, None]
        b = lp.rhs / row_scale
        types = list(lp.row_types)

        flip = np.where(b < 0, -1.0, 1.0)
        A = A * flip[:, None]
        b = b * flip
        for i in np.nonzero(flip < 0)[0]:
            if types[i] == RowType.LE:
                types[i] = RowType.GE
            elif types[i] == RowType.GE:
                types[i] = RowType.LE

        n_slack = sum(t != RowType.EQ for t in types)
        n_art = sum(t != RowType.LE for t in types)
        total = n + n_slack + n_art
        tableau = np.zeros((m, total))
        tableau[:, :n] = A
        basis = []
        slack_col, art_col = n, n + n_slack
        for i, t in enumerate(types):
            if t == RowType.LE:
                tableau[i, slack_col] = 1.0
                basis.append(slack_col)
                slack_col += 1
            elif t == RowType.GE:
                tableau[i, slack_col] = -1.0
                tableau[i, art_col] = 1.0
                basis.append(art_col)
                slack_col += 1
                art_col += 1
            else:
                tableau[i, art_col] = 1.0
                basis.append(art_col)
                art_col += 1

        self.n = n
        self.artificial_start = n + n_slack
        self.total = total
        self.original = tableau.copy()
        self.tableau = tableau
        self.values = b.copy()
        self.basis = basis
        self.row_scale = row_scale
        self.flip = flip
        self.rhs_scale = max(1.0, float(np.max(np.abs(b)))) if m else 1.0

    def _entering(self, reduced: np.ndarray, allowed: np.ndarray, bland: bool) -> int:
        candidates = np.nonzero(allowed & (reduced > self.pivot_tol))[0]
        if candidates.size == 0:
            return -1
        if bland:
            return int(candidates[0])
        return int(candidates[np.argmax(reduced[candidates])])

    def _leaving(self, col: int, bland: bool) -> int:
        column = self.tableau[:, col]
        rows = np.nonzero(column > self.pivot_tol)[0]
        if rows.size == 0:
            return -1
        ratios = self.values[rows] / column[rows]
        best = float(np.min(ratios))
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        if bland:
            return int(min(ties, key=lambda i: self.basis[i]))
        return int(ties[np.argmax(column[ties])])

    def _pivot(self, row: int, col: int):
        T, v = self.tableau, self.values
        piv = T[row, col]
        T[row, :] /= piv
        v[row] /= piv
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row, :])
        v -= factors * v[row]
        np.maximum(v, 0.0, out=v, where=np.abs(v) < self.feas_tol * 1e-3)
        self.basis[row] = col
        self.pivots += 1

    def _run(self, cost: np.ndarray, allowed: np.ndarray) -> LpStatus:
        m = len(self.basis)
        max_pivots = (BLAND_FACTOR + 50) * (m + self.total) + 1000
        degenerate = 0
        bland = False
        for _ in range(max_pivots):
            reduced = cost - cost[self.basis] @ self.tableau
            col = self._entering(reduced, allowed, bland)
            if col < 0:
                return LpStatus.OPTIMAL
            row = self._leaving(col, bland)
            if row < 0:
                return LpStatus.UNBOUNDED
            if self.values[row] <= self.feas_tol * self.rhs_scale:
                degenerate += 1
                if not bland and degenerate > BLAND_FACTOR * self.total:
                    logger.debug(f"Switching to Bland's rule after {degenerate} degenerate pivots")
                    bland = True
            self._pivot(row, col)
        raise NumericError(
            "Simplex iteration limit reached",
            {"pivots": self.pivots, "rows": m, "columns": self.total},
        )

    def _phase_one(self) -> float:
        cost = np.zeros(self.total)
        cost[self.artificial_start :] = -1.0
        allowed = np.ones(self.total, dtype=bool)
        self._run(cost, allowed)
        residual = float(np.sum(self.values[np.array(self.basis) >= self.artificial_start]))
        return residual

    def _drive_out_artificials(self):
        for row, col in enumerate(self.basis):
            if col < self.artificial_start:
                continue
            candidates = np.nonzero(
                np.abs(self.tableau[row, : self.artificial_start]) > self.pivot_tol
            )[0]
            if candidates.size:
                self._pivot(row, int(candidates[0]))

    def _structural_x(self) -> np.ndarray:
        x = np.zeros(self.n)
        for row, col in enumerate(self.basis):
            if col < self.n:
                x[col] = max(self.values[row], 0.0)
        return x

    def _duals(self, cost: np.ndarray) -> np.ndarray:
        if not self.basis:
            return np.zeros(0)
        B = self.original[:, self.basis]
        try:
            y_scaled = np.linalg.solve(B.T, cost[self.basis])
        except np.linalg.LinAlgError:
            y_scaled = np.linalg.lstsq(B.T, cost[self.basis], rcond=None)[0]
        return y_scaled * self.flip / self.row_scale

    def phase_one(self) -> PhaseOneResult:
        residual = self._phase_one()
        feasible = residual <= self.feas_tol * self.rhs_scale
        return PhaseOneResult(feasible, self._structural_x(), residual)

    def solve(self) -> LpSolution:
        m = len(self.basis)
        residual = self._phase_one() if m else 0.0
        if residual > self.feas_tol * self.rhs_scale:
            logger.debug(f"LP infeasible: phase-one residual {residual:.3e}")
            return LpSolution(
                LpStatus.INFEASIBLE,
                self._structural_x(),
                float("nan"),
                np.full(self.lp.n_rows, np.nan),
                list(self.basis),
                residual,
                self.pivots,
            )
        self._drive_out_artificials()

        cost = np.zeros(self.total)
        cost[: self.n] = self.lp.objective
        allowed = np.zeros(self.total, dtype=bool)
        allowed[: self.artificial_start] = True
        if m == 0:
            status = LpStatus.UNBOUNDED if np.any(self.lp.objective > 0) else LpStatus.OPTIMAL
        else:
            status = self._run(cost, allowed)

        x = self._structural_x()
        if status == LpStatus.UNBOUNDED:
            logger.debug("LP unbounded")
            return LpSolution(
                status, x, float("inf"), np.full(m, np.nan), list(self.basis), 0.0, self.pivots
            )
        return LpSolution(
            status,
            x,
            float(self.lp.objective @ x),
            self._duals(cost),
            list(self.basis),
            residual,
            self.pivots,
        )


def solve_lp(
    lp: LpProblem,
    pivot_tolerance: float = PIVOT_TOLERANCE,
    feasibility_tolerance: float = FEASIBILITY_TOLERANCE,
) -> LpSolution:
    """Solve ``lp`` with a fresh DenseSimplex instance."""
    solution = DenseSimplex(lp, pivot_tolerance, feasibility_tolerance).solve()
    logger.debug(
        f"LP {lp.n_rows}x{lp.n_cols}: {solution.status.value} after {solution.pivots} pivots"
    )
    return solution


def phase_one(lp: LpProblem) -> PhaseOneResult:
    """Feasibility check only: minimize the sum of artificial variables."""
    return DenseSimplex(lp).phase_one()


def check_optimality(lp: LpProblem, solution: LpSolution, tol: float = 1e-7) -> Optional[str]:
    """
    Verify primal feasibility, dual sign conventions, strong duality and complementary
    slackness of an optimal solution. Returns a description of the first violation.
    """
    scale = max(1.0, float(np.max(np.abs(lp.rhs))) if lp.n_rows else 1.0)
    activity = lp.rows @ solution.x
    slack = lp.rhs - activity
    y = solution.duals
    for i, t in enumerate(lp.row_types):
        if t == RowType.LE and (slack[i] < -1e-8 * scale or y[i] < -tol):
            return f"row {i} (<=): slack {slack[i]:.3e}, dual {y[i]:.3e}"
        if t == RowType.GE and (slack[i] > 1e-8 * scale or y[i] > tol):
            return f"row {i} (>=): slack {slack[i]:.3e}, dual {y[i]:.3e}"
        if t == RowType.EQ and abs(slack[i]) > 1e-8 * scale:
            return f"row {i} (=): residual {slack[i]:.3e}"
        if abs(y[i] * slack[i]) > tol * scale:
            return f"row {i}: complementary slackness {y[i] * slack[i]:.3e}"
    dual_objective = float(y @ lp.rhs)
    if abs(dual_objective - solution.objective) > tol * max(1.0, abs(solution.objective)):
        return f"duality gap: primal {solution.objective:.12g}, dual {dual_objective:.12g}"
    return None
