"""Independent reference values for validating bounds."""

from src.oracles.grid import GridBound, GridOracleConfig, grid_lp_bound, solve_grid_lp
from src.oracles.reference import (
    black_scholes_call,
    lo_upper_bound,
    lognormal_call_expectation,
    normal_cdf,
)

__all__ = [
    "GridBound",
    "GridOracleConfig",
    "black_scholes_call",
    "grid_lp_bound",
    "lo_upper_bound",
    "lognormal_call_expectation",
    "normal_cdf",
    "solve_grid_lp",
]
