import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.mixtures import (
    anchored_antiderivative,
    component_cdf,
    component_pdf,
    component_window,
    lognormal_params,
    smoothed_uniform_cdf,
    smoothed_uniform_pdf,
    transform,
)
from src.model import FamilyVariant, MixtureFamily, call_payoff, monomial
from src.polyalg import Domain, PiecewiseFunction, Polynomial, linear_combination
from src.utils.errors import DomainError, UnsupportedOperationError
from src.utils.metrics import sup_distance

NONNEGATIVE = Domain(0.0, math.inf)
REAL_LINE = Domain()

DENSITY_FAMILIES = [
    (MixtureFamily.uniform_zero(), (0.5, 100.0)),
    (MixtureFamily.khintchine_uniform(50.0), (0.0, 100.0)),
    (MixtureFamily.lognormal(9.0), (5.0, 100.0)),
    (MixtureFamily.smoothed_uniform(50.0, 2.0), (0.0, 100.0)),
]

LINEAR_FAMILIES = [
    MixtureFamily.uniform_zero(),
    MixtureFamily.khintchine_uniform(50.0),
    MixtureFamily.lognormal(9.0),
    MixtureFamily.smoothed_uniform(50.0, 2.0),
]

CLOSED_FORM_CASES = [
    (MixtureFamily.uniform_zero(), call_payoff(50.0, Domain(0.0, 100.0)), (0.5, 100.0), 1e-8),
    (MixtureFamily.khintchine_uniform(45.0), call_payoff(50.0, Domain(0.0, 100.0)),
     (0.0, 100.0), 1e-8),
    (MixtureFamily.lognormal(9.0), call_payoff(50.0), (30.0, 100.0), 1e-7),
    (MixtureFamily.smoothed_uniform(47.0, 1.0), call_payoff(50.0), (5.0, 95.0), 1e-6),
]


class TestComponents:
    def test_lognormal_params_match_mean_and_sd(self):
        params = lognormal_params(50.0, 13.75)
        assert params.sigma_x == pytest.approx(0.27003, rel=1e-3)
        assert params.mu_x == pytest.approx(3.87556, rel=1e-4)
        assert params.mean == pytest.approx(50.0)
        assert math.sqrt(params.variance) == pytest.approx(13.75)

    def test_lognormal_params_reject_nonpositive_mean(self):
        with pytest.raises(DomainError):
            lognormal_params(0.0, 1.0)

    def test_khintchine_density(self):
        family = MixtureFamily.khintchine_uniform(50.0)
        assert component_pdf(family, 60.0, 55.0) == pytest.approx(0.1)
        assert component_pdf(family, 40.0, 55.0) == 0.0
        assert component_cdf(family, 40.0, 45.0) == pytest.approx(0.5)
        assert component_window(family, 40.0) == (40.0, 50.0)

    def test_degenerate_uniform_is_a_point_mass(self):
        family = MixtureFamily.khintchine_uniform(50.0)
        assert component_pdf(family, 50.0, 50.0) == 0.0
        assert component_cdf(family, 50.0, 49.9) == 0.0
        assert component_cdf(family, 50.0, 50.0) == 1.0

    def test_dirac_has_no_density(self):
        with pytest.raises(UnsupportedOperationError):
            component_pdf(MixtureFamily.dirac(), 1.0, 1.0)
        assert component_cdf(MixtureFamily.dirac(), 1.0, [0.5, 1.0]).tolist() == [0.0, 1.0]

    def test_smoothed_uniform_cdf_limits(self):
        assert smoothed_uniform_cdf(0.0, 1.0, 10.0, -50.0) == pytest.approx(0.0, abs=1e-12)
        assert smoothed_uniform_cdf(0.0, 1.0, 10.0, 50.0) == pytest.approx(1.0, abs=1e-12)
        assert smoothed_uniform_cdf(0.0, 1.0, 10.0, 0.5) == pytest.approx(0.5)

    def test_smoothed_uniform_pdf_integrates_to_one(self):
        total, _ = quad(lambda u: smoothed_uniform_pdf(2.0, 5.0, 3.0, u), -20.0, 30.0,
                        points=[2.0, 5.0])
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_smoothed_uniform_cdf_is_integral_of_pdf(self):
        mass, _ = quad(lambda u: smoothed_uniform_pdf(2.0, 5.0, 3.0, u), -30.0, 4.0)
        assert smoothed_uniform_cdf(2.0, 5.0, 3.0, 4.0) == pytest.approx(mass, abs=1e-8)

    def test_smoothed_uniform_converges_to_uniform(self):
        u = np.array([2.6, 3.5, 4.4])
        expected = (u - 2.0) / 3.0
        assert smoothed_uniform_cdf(2.0, 5.0, 1e4, u) == pytest.approx(expected, abs=1e-4)
        assert smoothed_uniform_pdf(2.0, 5.0, 1e4, u) == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_smoothed_uniform_rejects_empty_interval(self):
        with pytest.raises(DomainError):
            smoothed_uniform_pdf(1.0, 1.0, 1.0, 0.0)

    @pytest.mark.parametrize("eta", [1.0, 10.0, 100.0])
    def test_smoothed_uniform_far_limits_and_mass(self, eta):
        a, b = 20.0, 30.0
        assert smoothed_uniform_cdf(a, b, eta, a - 100.0) == pytest.approx(0.0, abs=1e-9)
        assert smoothed_uniform_cdf(a, b, eta, b + 100.0) == pytest.approx(1.0, abs=1e-9)
        tail = 60.0 / eta
        mass, _ = quad(lambda u: smoothed_uniform_pdf(a, b, eta, u), a - tail, b + tail,
                       points=[a, b], limit=200, epsabs=1e-13, epsrel=1e-12)
        assert mass == pytest.approx(1.0, abs=1e-9)

    def test_smoothed_uniform_approaches_uniform_as_eta_grows(self):
        a, b = 2.0, 5.0
        u = np.linspace(a - 5.0, b + 5.0, 1301)
        uniform_cdf = np.clip((u - a) / (b - a), 0.0, 1.0)
        uniform_pdf = np.where((u >= a) & (u <= b), 1.0 / (b - a), 0.0)
        away = (np.abs(u - a) > 0.1) & (np.abs(u - b) > 0.1)
        etas = [10.0, 1e2, 1e3, 1e4]
        cdf_gaps = [sup_distance(smoothed_uniform_cdf(a, b, eta, u), uniform_cdf)
                    for eta in etas]
        pdf_gaps = [sup_distance(smoothed_uniform_pdf(a, b, eta, u), uniform_pdf, away)
                    for eta in etas]
        assert all(later < earlier for earlier, later in zip(cdf_gaps, cdf_gaps[1:]))
        assert all(later <= earlier for earlier, later in zip(pdf_gaps, pdf_gaps[1:]))
        assert cdf_gaps[-1] < 1e-4
        assert pdf_gaps[-1] < 1e-12

    @pytest.mark.parametrize("family, x_range", DENSITY_FAMILIES,
                             ids=[f.variant.value for f, _ in DENSITY_FAMILIES])
    def test_component_density_has_unit_mass(self, rng, family, x_range):
        for x in rng.uniform(*x_range, size=100):
            lo, hi = component_window(family, x, q=1e-12)
            if family.variant == FamilyVariant.SMOOTHED_UNIFORM:
                points = [min(family.anchor, x), max(family.anchor, x)]
            elif family.variant == FamilyVariant.LOGNORMAL:
                points = sorted([*component_window(family, x, q=0.01), x])
            else:
                points = None
            mass, _ = quad(lambda u: component_pdf(family, x, u), lo, hi, points=points,
                           limit=200)
            assert mass == pytest.approx(1.0, abs=1e-8), x


class TestTransform:
    @pytest.mark.parametrize("power", [1, 2, 3, 4])
    def test_uniform_zero_of_monomial(self, power):
        t = transform(monomial(power, NONNEGATIVE), MixtureFamily.uniform_zero())
        xs = np.array([0.5, 2.0, 7.0])
        assert t.is_piecewise_exact
        assert t.values(xs) == pytest.approx(xs**power / (power + 1))

    def test_uniform_zero_at_anchor_is_base_value(self):
        t = transform(monomial(2, NONNEGATIVE), MixtureFamily.uniform_zero())
        assert t(0.0) == pytest.approx(0.0)

    def test_khintchine_of_linear(self):
        t = transform(monomial(1, NONNEGATIVE), MixtureFamily.khintchine_uniform(50.0))
        assert t.values(np.array([20.0, 50.0, 90.0])) == pytest.approx([35.0, 50.0, 70.0])

    @pytest.mark.parametrize("x", [10.0, 45.0, 60.0, 95.0])
    def test_khintchine_call_matches_quadrature(self, x):
        t = transform(call_payoff(50.0, Domain(0.0, 100.0)), MixtureFamily.khintchine_uniform(45.0))
        assert t(x) == pytest.approx(t.numeric(x), rel=1e-8, abs=1e-10)

    def test_lognormal_second_moment(self):
        t = transform(monomial(2, NONNEGATIVE), MixtureFamily.lognormal(13.75))
        xs = np.array([20.0, 50.0, 80.0])
        assert t.values(xs) == pytest.approx(xs**2 + 13.75**2, rel=1e-10)

    @pytest.mark.parametrize("x", [30.0, 50.0, 75.0])
    def test_lognormal_call_matches_quadrature(self, x):
        t = transform(call_payoff(50.0), MixtureFamily.lognormal(9.0))
        assert t(x) == pytest.approx(t.numeric(x), rel=1e-7, abs=1e-9)

    def test_smoothed_uniform_moments(self):
        eta = 0.5
        base = PiecewiseFunction.polynomial(Polynomial.monomial(2), REAL_LINE)
        t = transform(base, MixtureFamily.smoothed_uniform(50.0, eta), scale=100.0)
        a, b = 50.0, 70.0
        expected = (a * a + a * b + b * b) / 3.0 + math.pi**2 / (3.0 * eta**2)
        assert t(70.0) == pytest.approx(expected, rel=1e-9)

    def test_smoothed_uniform_mean_at_mode(self):
        base = PiecewiseFunction.polynomial(Polynomial.monomial(1), REAL_LINE)
        t = transform(base, MixtureFamily.smoothed_uniform(50.0, 2.0), scale=100.0)
        assert t(50.0) == pytest.approx(50.0, rel=1e-9)

    @pytest.mark.parametrize("x", [20.0, 49.0, 52.0, 90.0])
    def test_smoothed_uniform_call_matches_quadrature(self, x):
        t = transform(call_payoff(50.0), MixtureFamily.smoothed_uniform(47.0, 1.0), scale=100.0)
        assert t(x) == pytest.approx(t.numeric(x), rel=1e-6, abs=1e-8)

    def test_dirac_is_identity(self):
        base = call_payoff(50.0)
        t = transform(base, MixtureFamily.dirac())
        assert t(70.0) == 20.0

    def test_anchored_antiderivative(self):
        prim = anchored_antiderivative(call_payoff(50.0, Domain(0.0, 100.0)), 45.0)
        assert prim(45.0) == pytest.approx(0.0)
        assert prim(0.0) == pytest.approx(0.0)
        assert prim(100.0) == pytest.approx(0.5 * 50.0**2)

    @pytest.mark.parametrize("family", LINEAR_FAMILIES, ids=lambda f: f.variant.value)
    def test_transform_is_linear(self, family):
        support = Domain(0.0, 100.0)
        f, g = call_payoff(40.0, support), monomial(2, support)
        combined = transform(linear_combination([f, g], [2.0, -0.5]), family, scale=100.0)
        tf, tg = transform(f, family, scale=100.0), transform(g, family, scale=100.0)
        xs = np.linspace(5.0, 95.0, 19)
        expected = 2.0 * tf.values(xs) - 0.5 * tg.values(xs)
        assert combined.values(xs) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("family, base, x_range, rel", CLOSED_FORM_CASES,
                             ids=[f.variant.value for f, *_ in CLOSED_FORM_CASES])
    def test_closed_form_matches_quadrature_at_random_points(self, rng, family, base,
                                                              x_range, rel):
        t = transform(base, family, scale=100.0)
        for x in rng.uniform(*x_range, size=100):
            assert t(x) == pytest.approx(t.numeric(x), rel=rel, abs=1e-8), x
