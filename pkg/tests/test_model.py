import math

import pytest

from src.model import (
    FamilyVariant,
    MixtureFamily,
    MomentConstraint,
    ProblemSpec,
    Sense,
    call_payoff,
    coinsurance_payoff,
    indicator_payoff,
    monomial,
    monomial_power,
    option_constrained_problem,
    pinned_moment,
    semivariance_payoff,
    standard_policy_problem,
)
from src.polyalg import Domain
from src.utils.errors import ValidationError

SUPPORT = Domain(0.0, 100.0)


class TestPayoffs:
    def test_call(self):
        f = call_payoff(50.0, SUPPORT)
        assert [f(x) for x in (0.0, 50.0, 75.0, 100.0)] == [0.0, 0.0, 25.0, 50.0]

    def test_call_at_support_ends_collapses_to_one_piece(self):
        assert len(call_payoff(0.0, SUPPORT).pieces) == 1
        assert len(call_payoff(100.0, SUPPORT).pieces) == 1

    def test_coinsurance(self):
        f = coinsurance_payoff(20.0, 60.0, 0.8, SUPPORT)
        assert f(10.0) == 0.0
        assert f(40.0) == pytest.approx(16.0)
        assert f(90.0) == pytest.approx(32.0)

    @pytest.mark.parametrize("d, u, gamma", [(30.0, 20.0, 0.5), (0.0, math.inf, 0.5),
                                             (0.0, 10.0, 1.5)])
    def test_coinsurance_rejects_bad_parameters(self, d, u, gamma):
        with pytest.raises(ValidationError):
            coinsurance_payoff(d, u, gamma)

    def test_indicator(self):
        f = indicator_payoff(80.0, math.inf, SUPPORT)
        assert f(79.0) == 0.0 and f(80.0) == 1.0 and f(100.0) == 1.0

    def test_semivariance(self):
        f = semivariance_payoff(50.0, SUPPORT)
        assert f(40.0) == pytest.approx(100.0)
        assert f(60.0) == 0.0

    def test_monomial_power(self):
        assert monomial_power(monomial(3, SUPPORT)) == 3
        assert monomial_power(call_payoff(10.0, SUPPORT)) is None
        with pytest.raises(ValidationError):
            monomial(0)


class TestMixtureFamily:
    def test_constructors(self):
        assert MixtureFamily.dirac().variant == FamilyVariant.DIRAC
        assert MixtureFamily.khintchine_uniform(45.0).anchor == 45.0
        assert MixtureFamily.uniform_zero().anchor == 0.0
        assert MixtureFamily.lognormal(9.0).with_alpha(3.0).alpha == 3.0

    def test_from_string_variant(self):
        assert MixtureFamily("lognormal", alpha=2.0).variant == FamilyVariant.LOGNORMAL

    @pytest.mark.parametrize(
        "kwargs",
        [{"variant": "modee"}, {"variant": "lognormal"}, {"variant": "lognormal", "alpha": 0.0},
         {"variant": "khintchine_uniform"}, {"variant": "smoothed_uniform", "mode": 50.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            MixtureFamily(**kwargs)

    def test_to_dict(self):
        assert MixtureFamily.smoothed_uniform(47.0, 10.0).to_dict() == {
            "variant": "smoothed_uniform",
            "mode": 47.0,
            "eta": 10.0,
        }


class TestProblemSpec:
    def test_standard_policy_problem(self):
        spec = standard_policy_problem(50.0, 225.0, 40.0, 100.0)
        assert spec.m == 2
        assert spec.pinned_moment_bounds(1) == (50.0, 50.0)
        assert spec.pinned_moment_bounds(2) == (2725.0, 2725.0)
        assert spec.sense == Sense.UPPER
        assert spec.effective_search_cap == 100.0

    def test_third_moment_required(self):
        with pytest.raises(ValidationError):
            standard_policy_problem(50.0, 225.0, 40.0, 100.0, m=3)

    def test_mean_must_be_below_max_loss(self):
        with pytest.raises(ValidationError):
            standard_policy_problem(50.0, 225.0, 40.0, 50.0)

    def test_constraint_bounds_ordered(self):
        with pytest.raises(ValidationError):
            MomentConstraint(monomial(1), 2.0, 1.0)

    def test_jensen_checked_by_validate_only(self):
        constraints = (pinned_moment(1, 50.0, SUPPORT), pinned_moment(2, 2000.0, SUPPORT))
        spec = ProblemSpec(SUPPORT, call_payoff(50.0, SUPPORT), constraints)
        with pytest.raises(ValidationError):
            spec.validate()

    def test_requires_constraints(self):
        with pytest.raises(ValidationError):
            ProblemSpec(SUPPORT, call_payoff(50.0, SUPPORT), ())

    def test_target_must_cover_support(self):
        with pytest.raises(ValidationError):
            ProblemSpec(SUPPORT, call_payoff(50.0, Domain(0.0, 80.0)),
                        (pinned_moment(1, 50.0, SUPPORT),))

    def test_khintchine_mode_inside_support(self):
        with pytest.raises(ValidationError):
            standard_policy_problem(
                50.0, 225.0, 40.0, 100.0, family=MixtureFamily.khintchine_uniform(150.0)
            )

    def test_unbounded_search_cap_from_moments(self):
        spec = standard_policy_problem(50.0, 100.0, 40.0)
        assert spec.effective_search_cap == pytest.approx(50.0 + 20.0 * 10.0)
        assert spec.replace(search_cap=500.0).effective_search_cap == 500.0

    def test_negated(self):
        spec = standard_policy_problem(50.0, 225.0, 40.0, 100.0)
        neg = spec.negated()
        assert neg.sense == Sense.LOWER
        assert neg.target(80.0) == -40.0

    def test_option_constrained_problem(self):
        spec = option_constrained_problem([(60.0, 8.0), (40.0, 18.0)], 50.0, SUPPORT)
        assert [c.label for c in spec.constraints] == ["call(40)", "call(60)", "E[X^1]"]
        assert spec.target(40.0) == pytest.approx(100.0)

    def test_option_duplicate_strikes(self):
        with pytest.raises(ValidationError):
            option_constrained_problem([(40.0, 18.0), (40.0, 17.0)], 50.0, SUPPORT)
