import math

import numpy as np
import pytest

from src.cg import run_cg
from src.lpcore import LpStatus
from src.model import ProblemSpec, monomial, pinned_moment
from src.oracles import (
    GridOracleConfig,
    black_scholes_call,
    grid_lp_bound,
    lo_upper_bound,
    lognormal_call_expectation,
    normal_cdf,
    solve_grid_lp,
)
from src.polyalg import Domain
from src.utils.errors import DomainError, ValidationError

SUPPORT = Domain(0.0, 100.0)


class TestReference:
    def test_normal_cdf(self):
        assert normal_cdf(0.0) == 0.5
        assert normal_cdf(1.96) == pytest.approx(0.9750021, abs=1e-7)
        z = np.array([-3.0, -1.0, 2.5])
        assert normal_cdf(z) + normal_cdf(-z) == pytest.approx(np.ones(3))

    def test_black_scholes_at_the_money(self):
        assert black_scholes_call(49.5, 49.5, 0.01, 0.2, 1.0) == pytest.approx(4.1745, abs=0.01)

    def test_black_scholes_limits(self):
        assert black_scholes_call(49.5, math.inf, 0.01, 0.2, 1.0) == 0.0
        forward_intrinsic = 49.5 - 49.5 * math.exp(-0.01)
        assert black_scholes_call(49.5, 49.5, 0.01, 1e-6, 1.0) == pytest.approx(
            forward_intrinsic, abs=1e-6
        )
        prices = [black_scholes_call(49.5, 49.5, 0.01, v, 1.0) for v in (0.1, 0.2, 0.4)]
        assert prices == sorted(prices)

    def test_black_scholes_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            black_scholes_call(49.5, 49.5, 0.01, 0.0, 1.0)

    def test_lognormal_expectation_is_undiscounted_black_scholes(self, market):
        expected = lognormal_call_expectation(market.mean, market.sigma, market.x0)
        price = black_scholes_call(market.x0, market.x0, market.r, market.nu, market.t)
        assert market.discount * expected == pytest.approx(price, rel=1e-10)

    def test_lo_bound_regimes(self):
        assert lo_upper_bound(50.0, 15.0, 50.0) == pytest.approx(7.5)
        assert lo_upper_bound(50.0, 15.0, 0.0) == pytest.approx(50.0)
        assert lo_upper_bound(50.0, 15.0, 80.0) == pytest.approx(1.7705, abs=1e-4)

    def test_lo_bound_is_continuous_at_regime_boundary(self):
        boundary = (50.0**2 + 15.0**2) / 100.0
        below = lo_upper_bound(50.0, 15.0, boundary - 1e-9)
        above = lo_upper_bound(50.0, 15.0, boundary)
        assert below == pytest.approx(above, abs=1e-7)
        assert above == pytest.approx(25.0)

    def test_lo_bound_rejects_negative_strike(self):
        with pytest.raises(DomainError):
            lo_upper_bound(50.0, 15.0, -1.0)


class TestGridOracle:
    def mean_only_second_moment(self):
        return ProblemSpec(SUPPORT, monomial(2, SUPPORT), (pinned_moment(1, 50.0, SUPPORT),))

    def test_extreme_second_moment(self):
        cfg = GridOracleConfig(n=101, clip=(0.0, 100.0))
        assert grid_lp_bound(self.mean_only_second_moment(), cfg) == pytest.approx(5000.0)

    @pytest.mark.parametrize("kwargs", [{"n": 50}, {"clip": (0.0, math.inf)},
                                        {"clip": (10.0, 5.0)}])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValidationError):
            GridOracleConfig(**kwargs)

    def test_refined_grid_never_lowers_upper_bound(self, loss_policy):
        spec = loss_policy(45.0)
        coarse = grid_lp_bound(spec, GridOracleConfig(n=101))
        fine = grid_lp_bound(spec, GridOracleConfig(n=201))
        assert fine >= coarse - 1e-9
        assert run_cg(spec).bound >= fine - 1e-6

    def test_infeasible_window(self):
        cfg = GridOracleConfig(n=101, clip=(0.0, 40.0))
        result = solve_grid_lp(self.mean_only_second_moment(), cfg)
        assert result.status == LpStatus.INFEASIBLE
        assert math.isnan(result.bound)
