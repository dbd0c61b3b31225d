import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ggfrac import DomainError
from ggfrac import asymptotics as asy
from ggfrac.asymptotics import CaseTag

# 50-digit mpmath references.
LEAD_07 = 0.049624732271781824
RESIDUALS = [
    ((2.3, 20.3, 1.2), 9.163650308994739e-05),
    ((0.7, 20.3, 1.0), 0.00026842144223661855),
    ((3.1, 20.3, math.pi / 2), 7.471654171072303e-06),
    ((1.6, 5.5, 0.3), 0.008352573808019141),
]


class TestCases:
    def test_dispatch(self):
        assert asy.case_of(0.7, 20.3) is CaseTag.CASE_I
        assert asy.case_of(2.0, 5.0) is CaseTag.CASE_I
        assert asy.case_of(2.3, 0.5) is CaseTag.CASE_II

    @pytest.mark.parametrize("lam, nu, needle", [
        (0.0, 2.0, "lambda > 0"),
        (0.5, 0.3, "nu + lambda > 1"),
        (4.5, 1.0, "nu > lambda - 3"),
    ])
    def test_domain_names_condition(self, lam, nu, needle):
        with pytest.raises(DomainError, match=needle.replace("+", r"\+")):
            asy.case_of(lam, nu)


class TestLeadingAndResidual:
    def test_leading_examples(self):
        assert asy.leading_term(1.0, 2.0, math.pi / 2) == pytest.approx(-1.0 / 3.0, rel=1e-15)
        assert asy.leading_term(0.7, 20.3, 1.0) == pytest.approx(LEAD_07, rel=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(nu=st.floats(0.1, 60.0), theta=st.floats(0.01, 3.13))
    def test_leading_at_lambda_one(self, nu, theta):
        assert asy.leading_term(1.0, nu, theta) == pytest.approx(
            math.sin((nu + 1) * theta) / (nu + 1), abs=1e-15)

    def test_lambda_one_residual_vanishes(self):
        assert abs(asy.residual_direct(1.0, 5.5, 0.8)) <= 1e-13

    def test_residual_domain(self):
        with pytest.raises(DomainError):
            asy.residual_direct(0.0, 2.5, 1.0)
        with pytest.raises(DomainError):
            asy.residual_direct(0.7, 2.5, 0.0)

    @pytest.mark.parametrize("args, expected", RESIDUALS)
    def test_residual_reference(self, args, expected):
        assert asy.residual_direct(*args) == pytest.approx(expected, rel=1e-10)


class TestBounds:
    def test_lambda_one_is_zero(self):
        assert asy.bound_S(1.0, 7.3, 1.1)[0] == 0.0
        assert asy.bound_B(1.0, 7.3)[0] == 0.0

    def test_reference_values(self):
        assert asy.bound_S(3.1, 20.3, 1.0) == (pytest.approx(0.001007143212591234, rel=1e-12), CaseTag.CASE_II)
        assert asy.bound_S(0.7, 20.3, 1.0)[0] == pytest.approx(0.0007583408601208205, rel=1e-12)
        b, interval = asy.bound_B(0.7, 20.3)
        assert b == pytest.approx(0.19155803612317096, rel=1e-12)
        assert interval == (0.0, math.pi)
        b, (lo, hi) = asy.bound_B(3.1, 20.3, c=1.0)
        assert b == pytest.approx(9017.15639729247, rel=1e-12)
        assert lo == pytest.approx(1 / 20.3) and hi == pytest.approx(math.pi - 1 / 20.3)

    def test_c_must_be_positive(self):
        with pytest.raises(DomainError):
            asy.bound_B(3.1, 20.3, c=0.0)

    @settings(max_examples=60, deadline=None)
    @given(lam=st.floats(0.05, 4.0), nu=st.floats(3.0, 40.0), theta=st.floats(0.05, 3.09))
    def test_weighted_bound_is_weighted_S(self, lam, nu, theta):
        case = asy.case_of(lam, nu)
        w = asy.weight_exponent(case, lam)
        s = asy.bound_S(lam, nu, theta)[0]
        assert asy.weighted_bound(lam, nu, theta) == pytest.approx(
            math.sin(theta) ** (w - lam) * s, rel=1e-11, abs=1e-300)


class TestWeightedPair:
    def test_zero_endpoint(self):
        for lam in (0.7, 1.6, 2.3, 3.1):
            d = asy.weighted_pair(lam, 20.3, 0.0)
            assert d.weighted_residual == 0.0
            assert d.weighted_bound > 0.0

    @pytest.mark.parametrize("nu", [3.7, 20.3])
    def test_lambda_two_limits(self, nu):
        d = asy.weighted_pair(2.0, nu, math.pi)
        r = -3.0 * math.sin(nu * math.pi) / ((nu + 1) * (nu + 2) * (nu + 3))
        assert d.weighted_residual == pytest.approx(r, rel=1e-6)
        assert d.weighted_bound == pytest.approx(6.0 / (nu + 1) ** 3, rel=1e-6)

    def test_interior_reference(self):
        d = asy.weighted_pair(0.7, 20.3, 1.5)
        assert d.case_tag is CaseTag.CASE_I
        assert d.weight_exponent == pytest.approx(1.7)
        assert d.weighted_residual == pytest.approx(-3.709141345699552e-05, rel=1e-10)
        assert d.weighted_bound == pytest.approx(0.00013811324505832678, rel=1e-12)

    @pytest.mark.parametrize("lam", [0.7, 2.0, 3.1])
    def test_weighted_pair_approaches_limit(self, lam):
        # Interior values next to pi converge to the endpoint limit.
        nu = 20.3
        near = asy.weighted_pair(lam, nu, math.pi - 1e-6)
        at = asy.weighted_pair(lam, nu, math.pi)
        assert near.weighted_residual == pytest.approx(at.weighted_residual, rel=1e-3, abs=1e-6)
        assert near.weighted_bound == pytest.approx(at.weighted_bound, rel=1e-3)


class TestKernels:
    def test_g_at_zero(self):
        assert asy.kernel_g(0.8, 0.0) == pytest.approx(1j * math.sin(0.8))

    def test_g_examples(self):
        assert asy.kernel_g(math.pi / 2, 1.0) == pytest.approx(1j * math.sinh(1.0), abs=1e-16)
        g = asy.kernel_g(1.0, 0.5)
        assert g.real == pytest.approx(0.13791320657930903, rel=1e-14)
        assert g.imag == pytest.approx(0.8769731597851905, rel=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(theta=st.floats(1e-3, math.pi - 1e-3), t=st.floats(1e-8, 30.0))
    def test_g_upper_half_plane(self, theta, t):
        assert asy.kernel_g(theta, t).imag > 0.0

    def test_dg_closed_form(self):
        assert asy.kernel_dg(math.pi / 2, 1.0) == pytest.approx(1j * math.exp(-1.0), abs=1e-15)

    @pytest.mark.parametrize("theta", [0.4, 1.3, 2.6])
    @pytest.mark.parametrize("t", [1e-6, 1e-3, 0.05, 0.09, 0.11, 2.0])
    def test_dg_matches_difference_quotient(self, theta, t):
        h = 1e-6 * max(t, 1e-3)
        fd = (asy.kernel_g(theta, t + h) - asy.kernel_g(theta, max(t - h, 0.0))) / (t + h - max(t - h, 0.0))
        assert abs(asy.kernel_dg(theta, t) - fd) <= 1e-6 * max(1.0, abs(fd))

    def test_f_examples(self):
        assert asy.kernel_f(1.0, 0.7, 2.0) == 0.0
        assert asy.kernel_f(2.0, math.pi / 2, 1.0) == pytest.approx(1j * (math.sinh(1.0) - 1.0), abs=1e-15)
        f = asy.kernel_f(2.3, 1.0, 0.7)
        assert f.real == pytest.approx(0.265659811279297, rel=1e-12)
        assert f.imag == pytest.approx(0.26357719409053837, rel=1e-12)

    def test_f_small_and_large_t(self):
        f = asy.kernel_f(0.6, 2.5, 1e-3)
        assert f.real == pytest.approx(-0.19343099405200537, rel=1e-10)
        assert f.imag == pytest.approx(-0.2658335921164634, rel=1e-10)
        f = asy.kernel_f(3.1, 0.3, 4.0)
        assert f.real == pytest.approx(10.468805633386028, rel=1e-12)
        assert f.imag == pytest.approx(7.980803008408119, rel=1e-12)

    def test_f_limit_at_zero(self):
        lam, theta = 1.7, 1.1
        f0 = asy.kernel_f(lam, theta, 0.0)
        assert f0 == pytest.approx(asy.kernel_f(lam, theta, 1e-9), rel=1e-6)

    @settings(max_examples=60, deadline=None)
    @given(lam=st.floats(0.1, 4.0), theta=st.floats(0.1, 3.0), t=st.floats(0.05, 10.0))
    def test_f_matches_definition(self, lam, theta, t):
        g = asy.kernel_g(theta, t)
        direct = (cmath.exp((lam - 1) * cmath.log(g)) - cmath.exp((lam - 1) * cmath.log(1j * math.sin(theta)))) / t
        assert abs(asy.kernel_f(lam, theta, t) - direct) <= 1e-9 * max(1.0, abs(direct))

    def test_f_bound_examples(self):
        assert asy.f_bound(1.0, 0.7, 2.0) == 0.0
        assert asy.f_bound(2.0, math.pi / 2, 1.0) == pytest.approx(2 * math.e / 3, rel=1e-15)
        assert asy.f_bound(3.1, 0.8, 0.5) == pytest.approx(15.579528813655719, rel=1e-13)

    def test_kernel_value_bundle(self):
        kv = asy.kernel_value(2.3, 1.0, 0.7)
        assert kv.f == asy.kernel_f(2.3, 1.0, 0.7)
        assert kv.g == asy.kernel_g(1.0, 0.7)


class TestResidualIntegral:
    def test_lambda_one(self):
        res = asy.residual_integral(1.0, 5.5, 0.8)
        assert res.value == 0.0 and res.converged

    @pytest.mark.parametrize("lam, nu, theta", [(0.7, 20.3, 1.0), (3.1, 20.3, math.pi / 2)])
    def test_matches_direct(self, lam, nu, theta):
        direct = asy.residual_direct(lam, nu, theta)
        res = asy.residual_integral(lam, nu, theta)
        assert res.converged
        assert abs(res.value - direct) <= max(1e-6 * abs(direct), 1e-10)


class TestSzego:
    def test_leading_values(self):
        assert asy.szego_leading(200, 0.8, math.pi / 2) == pytest.approx(0.06930586133719654, rel=1e-12)
        assert asy.szego_leading(100, 0.8, 0.5) == pytest.approx(0.04242173844972908, rel=1e-12)

    def test_jacobi_normalization(self):
        assert asy.jacobi_weighted(100, 0.8, 0.5) == pytest.approx(0.042292951102608625, rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            asy.szego_leading(0, 0.8, 1.0)

    def test_error_decays(self):
        thetas = np.linspace(0.3, math.pi - 0.3, 41)
        errs = [max(abs(asy.jacobi_weighted(n, 0.8, t) - asy.szego_leading(n, 0.8, t)) for t in thetas)
                for n in (50, 100, 200)]
        assert errs[0] > errs[1] > errs[2]
