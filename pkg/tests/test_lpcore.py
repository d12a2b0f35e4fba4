import numpy as np
import pytest
from scipy.optimize import linprog

from src.lpcore import LpProblem, LpStatus, RowType, check_optimality, phase_one, solve_lp


def test_single_upper_bound():
    lp = LpProblem([1.0], [[1.0]], [RowType.LE], [5.0])
    sol = solve_lp(lp)
    assert sol.status == LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(5.0)
    assert sol.duals == pytest.approx([1.0])
    assert check_optimality(lp, sol) is None


def test_equality_dual():
    lp = LpProblem([1.0, 1.0], [[1.0, 1.0]], [RowType.EQ], [1.0])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(1.0)
    assert sol.duals == pytest.approx([1.0])


def test_ge_row_has_non_positive_dual():
    # max -x s.t. x >= 2
    lp = LpProblem([-1.0], [[1.0]], [RowType.GE], [2.0])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(-2.0)
    assert sol.duals[0] == pytest.approx(-1.0)
    assert check_optimality(lp, sol) is None


def test_contradictory_equalities_are_infeasible():
    lp = LpProblem([1.0], [[1.0], [1.0]], ["=", "="], [1.0, 2.0])
    assert solve_lp(lp).status == LpStatus.INFEASIBLE


def test_unbounded():
    lp = LpProblem([1.0, 0.0], [[0.0, 1.0]], [RowType.LE], [1.0])
    assert solve_lp(lp).status == LpStatus.UNBOUNDED


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        LpProblem([1.0, 1.0], [[1.0]], [RowType.LE], [1.0])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[1.0]], [RowType.LE, RowType.LE], [1.0])


def test_negative_rhs_is_normalised():
    # max -x s.t. -x <= -3  (x >= 3)
    lp = LpProblem([-1.0], [[-1.0]], [RowType.LE], [-3.0])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(-3.0)
    assert check_optimality(lp, sol) is None


class TestPhaseOne:
    def test_feasible_simplex_row(self):
        result = phase_one(LpProblem([0.0, 0.0], [[1.0, 1.0]], [RowType.EQ], [1.0]))
        assert result.feasible
        assert result.x.sum() == pytest.approx(1.0)

    def test_contradiction_residual(self):
        result = phase_one(LpProblem([0.0], [[1.0], [1.0]], ["=", "="], [1.0, 2.0]))
        assert not result.feasible
        assert result.residual == pytest.approx(1.0)

    def test_moment_rows_violating_jensen(self):
        atoms = np.linspace(0.0, 100.0, 11)
        rows = np.vstack([atoms, atoms**2, np.ones_like(atoms)])
        lp = LpProblem(np.zeros_like(atoms), rows, ["=", "=", "="], [50.0, 2000.0, 1.0])
        assert not phase_one(lp).feasible


def test_check_optimality_reports_bad_duals():
    lp = LpProblem([1.0], [[1.0]], [RowType.LE], [5.0])
    sol = solve_lp(lp)
    sol.duals = np.array([2.0])
    assert check_optimality(lp, sol) is not None


def test_matches_reference_solver_on_random_problems(rng):
    checked = 0
    for _ in range(60):
        n_rows, n_cols = rng.integers(1, 5), rng.integers(1, 5)
        rows = rng.integers(-3, 4, size=(n_rows, n_cols)).astype(float)
        rhs = rng.integers(0, 6, size=n_rows).astype(float)
        objective = rng.integers(-3, 4, size=n_cols).astype(float)
        # Box rows keep every problem bounded
        rows = np.vstack([rows, np.eye(n_cols)])
        rhs = np.concatenate([rhs, np.full(n_cols, 10.0)])
        lp = LpProblem(objective, rows, [RowType.LE] * len(rhs), rhs)

        ours = solve_lp(lp)
        ref = linprog(-objective, A_ub=rows, b_ub=rhs, bounds=(0, None), method="highs")
        assert ref.status == 0
        assert ours.status == LpStatus.OPTIMAL
        assert ours.objective == pytest.approx(-ref.fun, rel=1e-7, abs=1e-7)
        assert check_optimality(lp, ours) is None
        checked += 1
    assert checked == 60
