"""Bound problem data model and payoff builders."""

from src.model.builders import (
    call_payoff,
    coinsurance_payoff,
    indicator_payoff,
    monomial,
    option_constrained_problem,
    pinned_moment,
    semivariance_payoff,
    standard_policy_problem,
    variance_payoff,
)
from src.model.problem import (
    FamilyVariant,
    MixtureFamily,
    MomentConstraint,
    ProblemSpec,
    Sense,
    monomial_power,
)

__all__ = [
    "FamilyVariant",
    "MixtureFamily",
    "MomentConstraint",
    "ProblemSpec",
    "Sense",
    "call_payoff",
    "coinsurance_payoff",
    "indicator_payoff",
    "monomial",
    "monomial_power",
    "option_constrained_problem",
    "pinned_moment",
    "semivariance_payoff",
    "standard_policy_problem",
    "variance_payoff",
]
