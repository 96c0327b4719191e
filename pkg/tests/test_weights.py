import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from unclab.exponents import INF, ExponentPair, as_number, conjugate, fmt
from unclab.weights import (
    BrokenWeight,
    IntegralKind,
    combine,
    eval_weight,
    integral_x_to_inf,
    integral_zero_to_x,
    radial_power_integral,
    transpose,
)

exps = st.floats(-3, 3, allow_nan=False).filter(lambda a: abs(a + 1) > 1e-3)
xs = st.floats(1e-3, 1e3)


def quad_zero_to_x(A, x):
    a1, a2 = A
    total = integrate.quad(lambda y: y**a1, 0, min(x, 1.0), epsabs=0, epsrel=1e-12, limit=200)[0]
    if x > 1:
        total += integrate.quad(lambda y: y**a2, 1.0, x, epsabs=0, epsrel=1e-12, limit=200)[0]
    return total


def quad_x_to_inf(A, x):
    a1, a2 = A
    total = 0.0
    if x < 1:
        total += integrate.quad(lambda y: y**-a1, x, 1.0, epsabs=0, epsrel=1e-12, limit=200)[0]
    lo = max(x, 1.0)
    # substitute y = lo/s to map the tail onto (0, 1]
    total += integrate.quad(lambda s: lo * (lo / s) ** -a2 / s**2, 0, 1, epsabs=0, epsrel=1e-12,
                            limit=200)[0]
    return total


class TestEvaluation:
    @pytest.mark.parametrize("x, expected", [(0.5, 0.25), (1, 1), (2, 8)])
    def test_branches(self, x, expected):
        assert eval_weight((2, 3), x) == pytest.approx(expected, rel=1e-15)

    @given(exps, exps, xs)
    def test_negation_is_reciprocal(self, a1, a2, x):
        w = BrokenWeight(a1, a2)
        assert eval_weight(w, x) * eval_weight(-w, x) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("x", [0.5, 2.0])
    def test_inversion_swaps_regimes(self, x):
        w = BrokenWeight(2, 3)
        assert eval_weight(w, 1 / x) == pytest.approx(eval_weight(-transpose(w), x), rel=1e-15)

    def test_nonpositive_argument_rejected(self):
        with pytest.raises(ValueError):
            eval_weight((1, 1), 0.0)

    def test_array_input(self):
        out = eval_weight((1, 2), np.array([0.5, 3.0]))
        np.testing.assert_allclose(out, [0.5, 9.0])


class TestArithmetic:
    def test_transpose(self):
        assert transpose((2, 3)) == BrokenWeight(3, 2)
        assert transpose((0, 0)) == BrokenWeight(0, 0)
        assert BrokenWeight(2, 3).T == BrokenWeight(3, 2)

    def test_combine(self):
        assert combine((1, 2), "add", (3, 4)) == BrokenWeight(4, 6)
        assert combine((1, 2), ("scale", 2)) == BrokenWeight(2, 4)
        assert combine((1, 2), "sub", (1, 2)) == BrokenWeight(0, 0)
        assert 2 * BrokenWeight(1, 2) == BrokenWeight(2, 4)
        with pytest.raises(ValueError):
            combine((1, 2), "mul", (1, 1))

    def test_parse(self):
        assert BrokenWeight.parse("0.5,1") == BrokenWeight(Fraction(1, 2), 1)
        assert BrokenWeight.parse(2) == BrokenWeight(2, 2)
        assert BrokenWeight.parse("1/3") == BrokenWeight(Fraction(1, 3), Fraction(1, 3))
        with pytest.raises(ValueError):
            BrokenWeight.parse((1, 2, 3))

    def test_exponents_stay_exact(self):
        w = BrokenWeight("1/3", "2/3") + (Fraction(1, 3), 0)
        assert w == BrokenWeight(Fraction(2, 3), Fraction(2, 3))
        assert isinstance(w.a1, Fraction)

    def test_infinite_exponent_rejected(self):
        with pytest.raises(ValueError):
            BrokenWeight(math.inf, 1)


class TestExponents:
    def test_conjugates(self):
        assert conjugate(2) == 2
        assert conjugate(1) == INF
        assert conjugate(INF) == 1
        assert conjugate(Fraction(4, 3)) == 4

    def test_auxiliary_indices(self):
        e = ExponentPair(4, 2)
        assert e.r == 4 and e.p_sharp == 4 and e.q_sharp is None
        assert ExponentPair(2, 4).r is None
        assert ExponentPair(INF, 1).q_sharp == 2

    def test_parsing(self):
        assert as_number("4/3") == Fraction(4, 3)
        assert as_number("inf") == INF
        assert fmt(Fraction(1, 3)) == "0.333333"
        assert fmt(Fraction(3, 2)) == "1.5"

    def test_exponent_below_one_rejected(self):
        with pytest.raises(ValueError):
            ExponentPair(0.5, 2)


class TestIntegrals:
    def test_constant_weight(self):
        exact, asym = integral_zero_to_x((0, 0), 2)
        assert exact == pytest.approx(2)
        assert asym.kind is IntegralKind.POWER_ONLY
        assert asym.power == BrokenWeight(1, 1)

    def test_log_case(self):
        exact, asym = integral_zero_to_x((0, -1), 2)
        assert exact == pytest.approx(1 + math.log(2), rel=1e-14)
        assert asym.kind is IntegralKind.POWER_PLUS_LOG
        assert exact == pytest.approx(quad_zero_to_x((0, -1), 2), rel=1e-10)

    def test_divergent_at_zero(self):
        exact, asym = integral_zero_to_x((-1, 0), 2)
        assert exact == INF and asym.kind is IntegralKind.INFINITE

    def test_tail_integrals(self):
        assert integral_x_to_inf((2, 2), 1)[0] == pytest.approx(1)
        assert integral_x_to_inf((2, 2), 1)[1].kind is IntegralKind.POWER_ONLY
        assert integral_x_to_inf((2, 0.5), 1)[0] == INF
        exact, _ = integral_x_to_inf((0.5, 2), 0.5)
        assert exact == pytest.approx(2 - math.sqrt(2) + 1, rel=1e-14)

    def test_bad_argument(self):
        with pytest.raises(ValueError):
            integral_zero_to_x((0, 0), 0)

    @settings(max_examples=200, deadline=None)
    @given(exps, exps, xs)
    def test_zero_to_x_matches_quadrature(self, a1, a2, x):
        exact, _ = integral_zero_to_x((a1, a2), x)
        if a1 <= -1:
            assert exact == INF
            return
        assert exact == pytest.approx(quad_zero_to_x((a1, a2), x), rel=1e-8)

    @settings(max_examples=200, deadline=None)
    @given(exps, exps, xs)
    def test_x_to_inf_matches_quadrature(self, a1, a2, x):
        exact, _ = integral_x_to_inf((a1, a2), x)
        if a2 <= 1:
            assert exact == INF
            return
        assume(a2 > 1.05)  # quadrature of very slow tails loses digits
        assert exact == pytest.approx(quad_x_to_inf((a1, a2), x), rel=1e-8)

    @given(exps, exps)
    def test_monotone_in_x(self, a1, a2):
        grid = np.logspace(-3, 3, 25)
        lower = [integral_zero_to_x((a1, a2), x)[0] for x in grid]
        upper = [integral_x_to_inf((a1, a2), x)[0] for x in grid]
        if a1 > -1:
            assert np.all(np.diff(lower) >= 0)
        if a2 > 1:
            assert np.all(np.diff(upper) <= 0)

    @given(st.floats(-0.5, 2), st.floats(-0.5, 2))
    def test_shape_bracket(self, a1, a2):
        for x in (1e-3, 1.0, 1e3):
            exact, asym = integral_zero_to_x((a1, a2), x)
            assert 1 / 3 <= exact / asym.model(x) <= 3

    def test_radial_power_integral(self):
        assert radial_power_integral((0, -2), 0, INF) == pytest.approx(2.0)
        assert radial_power_integral((-1, -2), 0, 1) == INF
        assert radial_power_integral((0, 0), 0, INF) == INF
        assert radial_power_integral((1, 1), 0.5, 2) == pytest.approx((4 - 0.25) / 2)
