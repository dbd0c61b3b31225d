import math

import pytest
from hypothesis import given, settings, strategies as st

from ggfrac import DomainError, GgfParams, Side
from ggfrac.hypergeom import (
    Accumulation,
    SeriesPolicy,
    cospi,
    floor_parity,
    gamma_signed,
    gauss_2f1_complement,
    gauss_2f1_truncated,
    ggf_series,
    ln_gamma,
    pochhammer,
    rgamma,
    sinpi,
)

# 50-digit mpmath references.
LN_FACT_20 = 42.335616460753485
HYP_REFERENCE = [
    ((-1.3, 2.7, 1.2, 0.25), 0.3195126469889327),
    ((-2.5, 3.9, 1.2, 0.1), 0.31896393043465504),
    ((-20.3, 21.7, 1.2, 0.6), -0.001176652525140901),
    ((0.5, 1.5, 2.5, 0.7), 1.3648631805591698),
]


class TestGamma:
    def test_known_values(self):
        assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
        assert ln_gamma(1.0) == 0.0
        assert ln_gamma(2.0) == 0.0
        assert ln_gamma(21.0) == pytest.approx(LN_FACT_20, rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            ln_gamma(0.0)
        with pytest.raises(DomainError):
            gamma_signed(-3.0)

    def test_negative_arguments_by_reflection(self):
        lg, sg = gamma_signed(-0.5)
        assert sg == -1
        assert math.exp(lg) == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-14)
        lg, sg = gamma_signed(-1.5)
        assert sg == 1
        assert math.exp(lg) == pytest.approx(4.0 / 3.0 * math.sqrt(math.pi), rel=1e-14)

    def test_rgamma_vanishes_at_poles(self):
        assert rgamma(0.0) == 0.0
        assert rgamma(-4.0) == 0.0
        assert rgamma(3.0) == pytest.approx(0.5, rel=1e-15)

    @pytest.mark.parametrize("x", [0.5, 1.7, 33.2, 500.0])
    def test_recurrence(self, x):
        lhs = ln_gamma(x + 1.0) - ln_gamma(x) - math.log(x)
        assert abs(lhs) <= 1e-13 * abs(ln_gamma(x + 1.0)) + 1e-15

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1.0, max_value=100.0))
    def test_stirling_sandwich(self, x):
        ratio = math.exp(ln_gamma(x + 1.0) - (0.5 * math.log(2 * math.pi) + (x + 0.5) * math.log(x) - x))
        assert 1.0 < ratio < math.exp(1.0 / (12.0 * x))

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=-30.0, max_value=30.0).filter(lambda v: abs(v - round(v)) > 1e-3))
    def test_reflection_identity(self, x):
        lg1, s1 = gamma_signed(x)
        lg2, s2 = gamma_signed(1.0 - x)
        product = s1 * s2 * math.exp(lg1 + lg2)
        assert product == pytest.approx(math.pi / sinpi(x), rel=1e-12)


class TestTrig:
    def test_exact_zeros(self):
        for k in range(-5, 6):
            assert sinpi(float(k)) == 0.0
            assert cospi(k + 0.5) == 0.0

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=-50.0, max_value=50.0))
    def test_matches_libm(self, x):
        assert sinpi(x) == pytest.approx(math.sin(math.pi * x), abs=1e-13)

    def test_floor_parity(self):
        assert floor_parity(0.3) == 1
        assert floor_parity(1.0) == -1
        assert floor_parity(2.7) == 1
        assert floor_parity(3.99) == -1


class TestPochhammer:
    def test_examples(self):
        assert pochhammer(7.3, 0) == 1.0
        assert pochhammer(3.0, 2) == 12.0
        assert pochhammer(-2.0, 3) == 0.0

    def test_negative_count(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestSeries:
    def test_zero_argument(self):
        res = gauss_2f1_truncated(0.3, 1.7, 2.2, 0.0)
        assert res.value == 1.0
        assert res.terms_used == 1
        assert res.converged

    def test_chebyshev_closed_form(self):
        nu, t = 2.5, 0.4
        res = gauss_2f1_truncated(-nu, nu, 0.5, math.sin(t) ** 2)
        assert res.value == pytest.approx(math.cos(2.0), rel=1e-14)

    @pytest.mark.parametrize("args, expected", HYP_REFERENCE)
    def test_reference_values(self, args, expected):
        res = gauss_2f1_truncated(*args)
        assert res.converged
        assert res.value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 4, 9])
    def test_terminates_for_integer_degree(self, n):
        res = gauss_2f1_truncated(-float(n), n + 2.4, 1.7, 0.8)
        assert res.terms_used <= n + 1
        assert res.tail_bound == 0.0

    def test_pole_of_c(self):
        with pytest.raises(DomainError):
            gauss_2f1_truncated(0.5, 0.5, -2.0, 0.3)

    def test_argument_outside_disc(self):
        with pytest.raises(DomainError):
            gauss_2f1_truncated(0.5, 0.5, 1.5, 1.2)

    def test_non_convergence_is_flagged(self):
        res = gauss_2f1_truncated(-40.5, 43.5, 2.0, 0.999, SeriesPolicy(max_terms=20))
        assert not res.converged

    @pytest.mark.parametrize("mode", list(Accumulation))
    def test_accumulation_modes_agree(self, mode):
        res = gauss_2f1_truncated(-20.3, 21.7, 1.2, 0.6, SeriesPolicy(accumulation=mode))
        assert res.value == pytest.approx(-0.001176652525140901, rel=1e-11)

    def test_complement_near_one(self):
        res = gauss_2f1_complement(-7.3, 10.5, 2.1, 0.1)
        assert res.value == pytest.approx(0.08644146760619632, rel=1e-12)

    def test_complement_logarithmic_case(self):
        # c - a - b = 0 exactly: logarithmic connection.
        a, b = -2.5, 3.0
        res = gauss_2f1_complement(a, b, a + b, 0.3)
        direct = gauss_2f1_truncated(a, b, a + b, 0.7)
        assert res.value == pytest.approx(direct.value, rel=1e-11)

    def test_ggf_series_sides(self):
        right = ggf_series(GgfParams(0.7, 3.4), 1.1)
        left = ggf_series(GgfParams(0.7, 3.4, Side.LEFT), math.pi - 1.1)
        assert left.value == pytest.approx(floor_parity(3.4) * right.value, rel=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(lam=st.floats(0.0, 3.0), nu=st.floats(0.0, 8.0), theta=st.floats(0.6, 2.5))
    def test_z_stability(self, lam, nu, theta):
        right = ggf_series(GgfParams(lam, nu), theta)
        left = ggf_series(GgfParams(lam, nu, Side.LEFT), math.pi - theta)
        if right.converged and left.converged:
            scale = max(right.abs_sum, left.abs_sum, 1.0)
            assert abs(left.value - floor_parity(nu) * right.value) <= 4 * math.ulp(scale)
