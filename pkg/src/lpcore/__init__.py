"""Dense linear programming with dual values."""

from src.lpcore.simplex import (
    DenseSimplex,
    LpProblem,
    LpSolution,
    LpStatus,
    PhaseOneResult,
    RowType,
    check_optimality,
    phase_one,
    solve_lp,
)

__all__ = [
    "DenseSimplex",
    "LpProblem",
    "LpSolution",
    "LpStatus",
    "PhaseOneResult",
    "RowType",
    "check_optimality",
    "phase_one",
    "solve_lp",
]
