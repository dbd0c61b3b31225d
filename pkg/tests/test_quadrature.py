import math

import numpy as np
import pytest

from ggfrac import ConvergenceError, DomainError, GgfParams
from ggfrac.ggf import evaluate
from ggfrac.quadrature import (
    QuadMethod,
    QuadResult,
    QuadSpec,
    adaptive_gauss,
    gegenbauer_weighted_integrand,
    integrate_endpoint_singular,
    integrate_semiinfinite_expdecay,
    mehler_integral,
    rl_fractional_integral_right,
    tanh_sinh,
    truncation_point,
)

BETA_13_06 = 1.3896380596359632  # mpmath beta(1.3, 0.6)
GAMMA_17_OVER_21 = 0.005135922298339567  # mpmath gamma(1.7) / 21^1.7
EPS = np.finfo(float).eps

METHODS = [QuadSpec(), QuadSpec(method=QuadMethod.ADAPTIVE_GAUSS)]


class TestRules:
    def test_polynomial(self):
        res = tanh_sinh(lambda x, da, db: x**3, 0.0, 2.0)
        assert res.converged
        assert res.value == pytest.approx(4.0, rel=1e-14)
        res = adaptive_gauss(lambda x: x**3, 0.0, 2.0)
        assert res.value == pytest.approx(4.0, rel=1e-14)

    def test_inverse_square_root_end(self):
        res = integrate_endpoint_singular(lambda x, d: d**-0.5, 0.0, 1.0, -0.5)
        assert res.value == pytest.approx(2.0, rel=1e-12)

    def test_beta_integral(self):
        res = integrate_endpoint_singular(lambda x, d: x**0.3 * d**-0.4, 0.0, 1.0, -0.4)
        assert res.value == pytest.approx(BETA_13_06, rel=1e-11)
        assert abs(res.value - BETA_13_06) <= 10 * res.error_estimate + 4 * EPS * BETA_13_06

    def test_empty_interval(self):
        with pytest.raises(DomainError):
            integrate_endpoint_singular(lambda x, d: x, 0.5, 0.5, 0.0)
        with pytest.raises(DomainError):
            tanh_sinh(lambda x, da, db: x, 1.0, 0.0)

    def test_non_integrable_exponent(self):
        with pytest.raises(DomainError):
            integrate_endpoint_singular(lambda x, d: 1 / d, 0.0, 1.0, -1.0)

    def test_result_arithmetic(self):
        a = QuadResult(1.0, 1e-3, 10, True)
        b = QuadResult(2.0, 2e-3, 5, False)
        c = a + b
        assert (c.value, c.evaluations, c.converged) == (3.0, 15, False)
        assert c.error_estimate == pytest.approx(3e-3)
        assert a.scaled(-2.0).error_estimate == pytest.approx(2e-3)
        with pytest.raises(ConvergenceError):
            b.require()

    def test_bad_spec(self):
        with pytest.raises(DomainError):
            QuadSpec(abs_tol=0.0)


class TestSemiInfinite:
    def test_gamma_closed_form(self):
        res = integrate_semiinfinite_expdecay(lambda t: t**2 * np.exp(-3 * t), 3.0, 2.0)
        assert res.value == pytest.approx(2.0 / 27.0, rel=1e-10)

    def test_fractional_power(self):
        res = integrate_semiinfinite_expdecay(lambda t: t**0.7 * np.exp(-21 * t), 21.0, 0.7)
        assert res.value == pytest.approx(GAMMA_17_OVER_21, rel=1e-10)
        assert abs(res.value - GAMMA_17_OVER_21) <= 10 * res.error_estimate + 4 * EPS * GAMMA_17_OVER_21

    def test_zero_integrand(self):
        assert integrate_semiinfinite_expdecay(lambda t: 0 * t, 1.0, 0.0).value == 0.0

    @pytest.mark.parametrize("spec", METHODS)
    @pytest.mark.parametrize("z", [0.3, 1.0, 2.6])
    @pytest.mark.parametrize("a", [1.0, 5.0, 21.0])
    def test_calibration_grid(self, spec, z, a):
        res = integrate_semiinfinite_expdecay(lambda t: t**z * np.exp(-a * t), a, z, spec)
        exact = math.exp(math.lgamma(z + 1) - (z + 1) * math.log(a))
        assert res.value == pytest.approx(exact, rel=1e-10)

    def test_truncation_point_bounds_envelope(self):
        T = truncation_point(2.0, 3.0, 1e-14)
        assert T**3 * math.exp(-2.0 * T) / 2.0 <= 1e-14 * (1 + 1e-9)

    def test_rate_domain(self):
        with pytest.raises(DomainError):
            integrate_semiinfinite_expdecay(lambda t: t, 0.0, 1.0)


class TestMehler:
    @pytest.mark.parametrize("phi", [0.3, 0.9, 2.0])
    def test_lambda_one_is_closed_form(self, phi):
        res = mehler_integral(1.0, 3.7, phi)
        assert res.value == pytest.approx(math.sin(phi) * evaluate(GgfParams(1.0, 3.7), phi), rel=1e-12)

    def test_fractional(self):
        lam, nu, phi = 0.6, 12.4, 2.8
        expected = math.sin(phi) ** (2 * lam - 1) * evaluate(GgfParams(lam, nu), phi)
        assert mehler_integral(lam, nu, phi).value == pytest.approx(expected, rel=1e-6)

    def test_degenerate_angle(self):
        res = mehler_integral(1.5, 3.7, 1e-9)
        assert res.value == 0.0 and res.converged

    def test_domain(self):
        with pytest.raises(DomainError):
            mehler_integral(0.0, 1.0, 1.0)


class TestFractionalIntegral:
    @pytest.mark.parametrize("spec", METHODS)
    def test_power_function(self, spec):
        eta, s, x = 0.0, 0.5, 0.0
        res = rl_fractional_integral_right(lambda y, om: om**eta, s, x, spec)
        assert res.value == pytest.approx(1.0 / math.gamma(1.5), rel=1e-10)

    def test_power_function_general(self):
        eta, s, x = 1.7, 0.3, -0.4
        res = rl_fractional_integral_right(lambda y, om: om**eta, s, x)
        expected = math.gamma(eta + 1) / math.gamma(eta + s + 1) * (1 - x) ** (eta + s)
        assert res.value == pytest.approx(expected, rel=1e-10)

    def test_order_one_is_plain_integral(self):
        res = rl_fractional_integral_right(lambda y, om: np.cos(y), 1.0, 0.2)
        assert res.value == pytest.approx(math.sin(1.0) - math.sin(0.2), rel=1e-12)

    def test_gegenbauer_identity(self):
        lam, nu, s, x = 0.4, 2.7, 0.5, 0.3
        res = rl_fractional_integral_right(gegenbauer_weighted_integrand(lam, nu), s, x)
        # 50-digit mpmath quadrature of the left side and closed form of the right side.
        assert res.value == pytest.approx(-0.2317867023705969, rel=1e-6)

    def test_order_domain(self):
        with pytest.raises(DomainError):
            rl_fractional_integral_right(lambda y, om: om, 0.0, 0.1)
