import math

import numpy as np
import pytest

from src.cg import CGSettings, engine
from src.figures import MarketPolicy
from src.model import Sense, standard_policy_problem

# Loss policy: mean 50, sd 15, maximum loss 100
LOSS_MU = 50.0
LOSS_SIGMA = 15.0
LOSS_B = 100.0

# At-the-money call: spot 49.50, rate 1%, volatility 20%, one year
MARKET = MarketPolicy(x0=49.5, r=0.01, nu=0.2, t=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings():
    return CGSettings()


@pytest.fixture
def market():
    return MARKET


@pytest.fixture
def loss_policy():
    def build(d=50.0, **kwargs):
        return standard_policy_problem(LOSS_MU, LOSS_SIGMA**2, d, LOSS_B, **kwargs)

    return build


@pytest.fixture
def market_sigma():
    return MARKET.x0 * math.exp(MARKET.r * MARKET.t) * math.sqrt(math.expm1(MARKET.nu**2))


def assert_certificate(result):
    """Every master value M_J satisfies 0 <= B - M_J <= S_J in maximization form."""
    sign = 1.0 if result.sense == Sense.UPPER else -1.0
    slack = max(1e-7 * max(1.0, abs(result.bound)), result.epsilon)
    for record in result.trace:
        distance = sign * (result.bound - record.master_value)
        assert -slack <= distance <= max(record.reduced_cost, 0.0) + slack, record
    if result.converged:
        assert result.gap <= result.epsilon


@pytest.fixture(autouse=True)
def certified_results(monkeypatch):
    """Checks the optimality certificate of every bound computed during a test."""
    results = []

    class RecordedResult(engine.BoundResult):
        def __init__(self, *args, **kwargs):
            super().__init__(*args, **kwargs)
            results.append(self)

    monkeypatch.setattr(engine, "BoundResult", RecordedResult)
    yield results
    for result in results:
        assert_certificate(result)
