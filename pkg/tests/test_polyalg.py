import math

import numpy as np
import pytest

from src.polyalg import (
    Domain,
    Piece,
    PiecewiseFunction,
    Polynomial,
    antiderivative,
    divide_by_linear,
    global_max,
    linear_combination,
    roots_real,
)
from src.utils.errors import DomainError, NotDivisibleError, UnsupportedOperationError


def call(d, support=Domain(0.0, math.inf)):
    return PiecewiseFunction.from_polynomials(
        [support.lower, d, support.upper], [Polynomial((0.0,)), Polynomial((-d, 1.0))]
    )


class TestPolynomial:
    def test_canonical_form_drops_tiny_trailing_coefficients(self):
        p = Polynomial((1.0, 2.0, 1e-15))
        assert p.coefficients == (1.0, 2.0)
        assert p.degree == 1

    def test_zero_polynomial(self):
        assert Polynomial(()).is_zero
        assert Polynomial((0.0, 0.0)).degree == 0

    @pytest.mark.parametrize(
        "coeffs, expected",
        [((1.0,), (0.0, 1.0)), ((0.0, 0.0, 1.0), (0.0, 0.0, 0.0, 1.0 / 3.0)),
         ((0.0, 2.0, 3.0), (0.0, 0.0, 1.0, 1.0))],
    )
    def test_antiderivative(self, coeffs, expected):
        result = antiderivative(Polynomial(coeffs))
        assert result.coefficients == pytest.approx(expected)
        assert result(0.0) == 0.0

    def test_antiderivative_then_derivative_is_identity(self, rng):
        for _ in range(20):
            p = Polynomial(rng.normal(size=rng.integers(1, 6)))
            assert antiderivative(p).derivative().coefficients == pytest.approx(p.coefficients)

    def test_divide_difference_of_squares(self):
        q = divide_by_linear(Polynomial((-2500.0, 0.0, 1.0)), 50.0)
        assert q.coefficients == pytest.approx((50.0, 1.0))

    def test_divide_cubic(self):
        q = divide_by_linear(Polynomial((-8.0, 0.0, 0.0, 1.0)), 2.0)
        assert q.coefficients == pytest.approx((4.0, 2.0, 1.0))

    def test_divide_not_divisible(self):
        with pytest.raises(NotDivisibleError):
            divide_by_linear(Polynomial((1.0, 0.0, 1.0)), 0.0)

    def test_divide_then_multiply_reproduces(self, rng):
        for _ in range(20):
            c = float(rng.uniform(-5, 5))
            q = Polynomial(rng.normal(size=4))
            p = q * Polynomial.linear_factor(c)
            back = divide_by_linear(p, c) * Polynomial.linear_factor(c)
            assert back.coefficients == pytest.approx(p.coefficients, rel=1e-9, abs=1e-9)

    def test_shift(self):
        p = Polynomial((0.0, 0.0, 1.0))
        assert p.shift(3.0).coefficients == pytest.approx((9.0, 6.0, 1.0))


class TestRoots:
    def test_quadratic_in_domain(self):
        assert roots_real(Polynomial((-1.0, 0.0, 1.0)), Domain(0.0, 2.0)) == pytest.approx([1.0])

    def test_biquadratic(self):
        roots = roots_real(Polynomial((4.0, 0.0, -5.0, 0.0, 1.0)))
        assert roots == pytest.approx([-2.0, -1.0, 1.0, 2.0])

    def test_cubic_in_window(self):
        roots = roots_real(Polynomial((-6.0, 11.0, -6.0, 1.0)), Domain(1.5, 10.0))
        assert roots == pytest.approx([2.0, 3.0])

    def test_zero_polynomial_raises(self):
        with pytest.raises(DomainError):
            roots_real(Polynomial((0.0,)))

    def test_constant_has_no_roots(self):
        assert roots_real(Polynomial((3.0,))) == []

    def test_no_real_roots(self):
        assert roots_real(Polynomial((1.0, 0.0, 1.0))) == []

    def test_double_root_reported_once(self):
        assert roots_real(Polynomial((1.0, -2.0, 1.0))) == pytest.approx([1.0], abs=1e-6)

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_recovers_factored_roots(self, rng, degree):
        for _ in range(25):
            expected = np.sort(rng.uniform(-10, 10, size=degree))
            if degree > 1 and np.min(np.diff(expected)) < 1.0:
                continue
            p = Polynomial((1.0,))
            for r in expected:
                p = p * Polynomial.linear_factor(float(r))
            found = roots_real(p * float(rng.uniform(0.5, 3.0)))
            assert found == pytest.approx(list(expected), abs=1e-5)

    def test_degree_five_uses_companion(self):
        p = Polynomial((1.0,))
        for r in (-2.0, -1.0, 0.5, 1.0, 3.0):
            p = p * Polynomial.linear_factor(r)
        assert roots_real(p) == pytest.approx([-2.0, -1.0, 0.5, 1.0, 3.0], abs=1e-7)

    def test_residual_is_small(self):
        p = Polynomial((-6.0, 11.0, -6.0, 1.0))
        for r in roots_real(p):
            assert abs(p(r)) <= 1e-10 * p.eval_scale(r)


class TestPiecewise:
    def test_eval_square(self):
        fn = PiecewiseFunction.polynomial(Polynomial((0.0, 0.0, 1.0)))
        assert fn(3.0) == 9.0

    def test_eval_at_kink_uses_right_piece(self):
        assert call(50.0)(50.0) == 0.0
        assert call(50.0)(60.0) == 10.0

    def test_removable_singularity(self):
        piece = Piece(Polynomial((-25.0, 0.0, 1.0)), pole=5.0, limit=10.0)
        fn = PiecewiseFunction((0.0, 10.0), (piece,))
        assert fn(5.0) == 10.0
        assert fn(5.0 + 1e-6) == pytest.approx(10.0, abs=1e-5)

    def test_interior_pole_without_limit_rejected(self):
        with pytest.raises(DomainError):
            PiecewiseFunction((0.0, 10.0), (Piece(Polynomial((1.0,)), pole=5.0),))

    def test_eval_outside_support(self):
        with pytest.raises(DomainError):
            call(50.0, Domain(0.0, 100.0))(101.0)

    def test_breakpoints_must_increase(self):
        with pytest.raises(DomainError):
            PiecewiseFunction.from_polynomials([0.0, 0.0, 1.0], [Polynomial(), Polynomial()])

    def test_vectorized_matches_scalar(self):
        fn = call(50.0, Domain(0.0, 100.0))
        xs = np.linspace(0.0, 100.0, 101)
        assert fn.evaluate(xs) == pytest.approx([fn(x) for x in xs])

    def test_linear_combination(self):
        square = PiecewiseFunction.polynomial(Polynomial((0.0, 0.0, 1.0)), Domain(0.0, 100.0))
        combo = linear_combination([square, call(50.0)], [2.0, -1.0], constant=1.0)
        assert combo.support == Domain(0.0, 100.0)
        assert combo(60.0) == pytest.approx(1.0 + 2 * 3600.0 - 10.0)

    def test_linear_combination_distinct_poles(self):
        a = PiecewiseFunction((0.0, 1.0), (Piece(Polynomial((1.0,)), pole=-1.0),))
        b = PiecewiseFunction((0.0, 1.0), (Piece(Polynomial((1.0,)), pole=-2.0),))
        with pytest.raises(UnsupportedOperationError):
            linear_combination([a, b], [1.0, 1.0])

    def test_restrict(self):
        fn = call(50.0).restrict(Domain(60.0, 80.0))
        assert fn.breakpoints == (60.0, 80.0)
        assert fn(70.0) == 20.0


class TestGlobalMax:
    def test_vertex(self):
        fn = PiecewiseFunction.polynomial(Polynomial((-7.0, 6.0, -1.0)), Domain(0.0, 10.0))
        result = global_max(fn)
        assert (result.argmax, result.value, result.unbounded) == (
            pytest.approx(3.0),
            pytest.approx(2.0),
            False,
        )

    def test_monotone_piece(self):
        result = global_max(call(50.0, Domain(0.0, 100.0)))
        assert result.argmax == 100.0 and result.value == 50.0 and not result.unbounded

    def test_linear_growth_is_unbounded(self):
        fn = PiecewiseFunction.polynomial(Polynomial((0.0, 1.0)), Domain(0.0, math.inf))
        assert global_max(fn).unbounded

    def test_finite_asymptote(self):
        # 1 - 1 / (x + 1) approaches 1 from below
        fn = PiecewiseFunction((0.0, math.inf), (Piece(Polynomial((0.0, 1.0)), pole=-1.0),))
        result = global_max(fn)
        assert not result.unbounded
        assert result.value == pytest.approx(1.0)

    def test_dominates_random_samples(self, rng):
        fn = PiecewiseFunction.from_polynomials(
            [-3.0, -1.0, 2.0, 4.0],
            [Polynomial((1.0, 0.0, -1.0)), Polynomial((0.0, 1.0, 0.0, -0.5)),
             Polynomial((2.0, -3.0, 1.0, 0.0, -0.1))],
        )
        best = global_max(fn).value
        xs = rng.uniform(-3.0, 4.0, size=10_000)
        assert best >= np.max(fn.evaluate(xs)) - 1e-12
