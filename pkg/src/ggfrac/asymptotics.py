"""Large-degree behaviour: leading cosine term, residual and its bounds.

For lambda > 0 the weighted function (sin t)^lam G_nu^lam(cos t) splits into

    A(lam, nu) cos((nu + lam) t - lam pi / 2) + R(t),
    A = 2^lam Gamma(lam + 1/2) / (sqrt(pi) (nu + lam)^lam),

and R admits explicit envelopes S (pointwise in t), B (a t-free constant
over nu^(lam+1) sin t) and a weighted pair (R~, S~) that stays finite on
the closed interval.  The residual also equals a Laplace-type integral over
the contour kernel f, giving a second route to R.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .ggf import DEFAULT_POLICY, EndpointKind, endpoint_minus_one, evaluate, gegenbauer_integer
from .hypergeom import SeriesPolicy
from .params import AnglePoint, GgfParams, as_angle
from .quadrature import QuadResult, QuadSpec, integrate_semiinfinite_expdecay

__all__ = [
    "CaseTag",
    "AsymptoticDecomposition",
    "KernelValue",
    "case_of",
    "leading_amplitude",
    "leading_term",
    "residual_direct",
    "bound_S",
    "bound_B",
    "weighted_bound",
    "weighted_pair",
    "kernel_g",
    "kernel_dg",
    "kernel_f",
    "kernel_value",
    "f_bound",
    "residual_integral",
    "szego_leading",
]

_LN2 = math.log(2.0)
_LN_SQRT_PI = 0.5 * math.log(math.pi)


class CaseTag(str, enum.Enum):
    CASE_I = "case_i"
    CASE_II = "case_ii"


@dataclass(frozen=True)
class AsymptoticDecomposition:
    leading: float
    residual: float
    bound_S: float
    weighted_residual: float
    weighted_bound: float
    case_tag: CaseTag
    weight_exponent: float


@dataclass(frozen=True)
class KernelValue:
    g: complex
    f: complex
    t: float
    theta: float


def case_of(lam: float, nu: float) -> CaseTag:
    """Which envelope applies; raises DomainError naming the failed condition."""
    if not lam > 0:
        raise DomainError(f"bounds need lambda > 0, got {lam}")
    if not nu > 0:
        raise DomainError(f"bounds need nu > 0, got {nu}")
    if lam <= 2.0:
        if not nu + lam > 1.0:
            raise DomainError(f"case 0 < lambda <= 2 needs nu + lambda > 1 (got {nu + lam})")
        return CaseTag.CASE_I
    if not nu > lam - 3.0:
        raise DomainError(f"case lambda > 2 needs nu > lambda - 3 (got nu={nu}, lambda={lam})")
    return CaseTag.CASE_II


def _interior(theta) -> AnglePoint:
    th = as_angle(theta)
    if not 0.0 < th.theta < math.pi:
        raise DomainError(f"theta must lie strictly inside (0, pi), got {th.theta}")
    return th


def leading_amplitude(lam: float, nu: float) -> float:
    """2^lam Gamma(lam + 1/2) / (sqrt(pi) (nu + lam)^lam)."""
    return math.exp(lam * _LN2 + math.lgamma(lam + 0.5) - _LN_SQRT_PI - lam * math.log(nu + lam))


def leading_term(lam: float, nu: float, theta) -> float:
    if not lam > 0:
        raise DomainError(f"leading term needs lambda > 0, got {lam}")
    if not nu + lam > 0:
        raise DomainError("leading term needs nu + lambda > 0")
    th = as_angle(theta)
    return leading_amplitude(lam, nu) * math.cos((nu + lam) * th.theta - 0.5 * lam * math.pi)


def residual_direct(lam: float, nu: float, theta, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """R = (sin t)^lam G_nu^lam(cos t) - leading term, at an interior angle."""
    if not lam > 0:
        raise DomainError(f"residual needs lambda > 0, got {lam}")
    if not nu > 0:
        raise DomainError(f"residual needs nu > 0, got {nu}")
    th = _interior(theta)
    g = evaluate(GgfParams(lam, nu), th, policy)
    return th.sin_theta**lam * g - leading_term(lam, nu, th)


def _ln_k_case_i(lam: float) -> float:
    # ln(lam |lam - 1| 2^lam Gamma(lam + 1/2) / sqrt(pi)); caller handles lam == 1
    return math.log(lam * abs(lam - 1.0)) + lam * _LN2 + math.lgamma(lam + 0.5) - _LN_SQRT_PI


def _ln_k_case_ii(lam: float) -> float:
    return math.log(lam * (lam - 1.0)) + 1.5 * lam * _LN2 + math.lgamma(lam + 0.5) - _LN_SQRT_PI


def _ln_c_case_ii(lam: float) -> float:
    # ln(2^(2 - lam) Gamma(2 lam - 1) / Gamma(lam + 1))
    return (2.0 - lam) * _LN2 + math.lgamma(2.0 * lam - 1.0) - math.lgamma(lam + 1.0)


def bound_S(lam: float, nu: float, theta) -> tuple[float, CaseTag]:
    """Pointwise envelope S with |R| <= S on (0, pi)."""
    case = case_of(lam, nu)
    th = _interior(theta)
    cot = abs(th.x / th.sin_theta)
    if case is CaseTag.CASE_I:
        if lam == 1.0:
            return 0.0, case
        m = nu + lam - 1.0
        k = math.exp(_ln_k_case_i(lam) - (lam + 1.0) * math.log(m))
        return k * (cot + 2.0 / 3.0 * (lam + 1.0) / m), case
    n1, n3 = nu + 1.0, nu - lam + 3.0
    k = math.exp(_ln_k_case_ii(lam) - (lam + 1.0) * math.log(n1))
    c = math.exp(_ln_c_case_ii(lam) + (lam + 1.0) * math.log(n1) - (2.0 * lam - 1.0) * math.log(n3))
    extra = c * cot ** (lam - 2.0) * (cot + 2.0 / 3.0 * (2.0 * lam - 1.0) / n3)
    return k * (cot + 2.0 / 3.0 * (lam + 1.0) / n1 + extra), case


def bound_B(lam: float, nu: float, c: float = 1.0) -> tuple[float, tuple[float, float]]:
    """Constant B with |R| <= B / (nu^(lam+1) sin t), and the angle range where it is claimed.

    The range is the open interval (0, pi) for 0 < lambda <= 2 and
    [c/nu, pi - c/nu] otherwise.
    """
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    case = case_of(lam, nu)
    if case is CaseTag.CASE_I:
        if lam == 1.0:
            return 0.0, (0.0, math.pi)
        m = nu + lam - 1.0
        b = math.exp(_ln_k_case_i(lam)) * (3.0 * nu + 5.0 * lam - 1.0) / (3.0 * m) \
            * math.exp((1.0 - lam * lam) / m)
        return b, (0.0, math.pi)
    n3 = nu - lam + 3.0
    first = (3.0 * nu + 2.0 * lam + 5.0) / (nu + 1.0)
    second = math.exp((lam - 2.0) * math.log(c * math.pi) + math.lgamma(2.0 * lam - 1.0)
                      - math.lgamma(lam + 1.0)) \
        * (3.0 * nu + lam + 7.0) / n3 * math.exp((2.0 * lam - 5.0) * (lam + 1.0) / n3)
    b = math.exp(_ln_k_case_ii(lam)) / 3.0 * (first + second)
    return b, (c / nu, math.pi - c / nu)


def weight_exponent(case: CaseTag, lam: float) -> float:
    return lam + 1.0 if case is CaseTag.CASE_I else 2.0 * lam - 1.0


def weighted_bound(lam: float, nu: float, theta) -> float:
    """S~ = (sin t)^(w - lam) S written in sin/cos form, finite on [0, pi]."""
    case = case_of(lam, nu)
    th = as_angle(theta)
    s, ac = th.sin_theta, abs(th.x)
    if th.theta in (0.0, math.pi):
        s, ac = 0.0, 1.0
    if case is CaseTag.CASE_I:
        if lam == 1.0:
            return 0.0
        m = nu + lam - 1.0
        k = math.exp(_ln_k_case_i(lam) - (lam + 1.0) * math.log(m))
        return k * (ac + 2.0 / 3.0 * (lam + 1.0) / m * s)
    n1, n3 = nu + 1.0, nu - lam + 3.0
    k = math.exp(_ln_k_case_ii(lam) - (lam + 1.0) * math.log(n1))
    c = math.exp(_ln_c_case_ii(lam) + (lam + 1.0) * math.log(n1) - (2.0 * lam - 1.0) * math.log(n3))
    extra = c * (ac ** (lam - 1.0) + 2.0 / 3.0 * (2.0 * lam - 1.0) / n3 * s * ac ** (lam - 2.0))
    return k * (ac * s ** (lam - 2.0) + 2.0 / 3.0 * (lam + 1.0) / n1 * s ** (lam - 1.0) + extra)


def _weighted_residual_at_pi(lam: float, nu: float) -> float:
    """Limit of R~ as t -> pi: zero below lambda = 2, 2^(2 lam - 1) Q above."""
    if lam < 2.0:
        return 0.0
    behavior = endpoint_minus_one(lam, nu)
    if behavior.kind is EndpointKind.FINITE_VALUE:
        return 0.0
    return 2.0 ** (2.0 * lam - 1.0) * behavior.value


def weighted_pair(lam: float, nu: float, theta, policy: SeriesPolicy = DEFAULT_POLICY) -> AsymptoticDecomposition:
    """All pieces of the decomposition at one angle, endpoints included.

    At t = 0 and t = pi the unweighted residual and S are infinite or
    undefined and are reported as nan; the weighted pair uses its limits.
    """
    case = case_of(lam, nu)
    th = as_angle(theta)
    w = weight_exponent(case, lam)
    sb = weighted_bound(lam, nu, th)
    lead = leading_term(lam, nu, th)
    if th.theta == 0.0:
        return AsymptoticDecomposition(lead, math.nan, math.nan, 0.0, sb, case, w)
    if th.theta == math.pi:
        return AsymptoticDecomposition(lead, math.nan, math.nan, _weighted_residual_at_pi(lam, nu), sb, case, w)
    s = th.sin_theta
    g = evaluate(GgfParams(lam, nu), th, policy)
    residual = s**lam * g - lead
    # Weighted residual formed directly so the large G near pi is tamed by the weight first.
    weighted = s**w * g - s ** (w - lam) * lead
    return AsymptoticDecomposition(lead, residual, bound_S(lam, nu, th)[0], weighted, sb, case, w)


def kernel_g(theta, t: float) -> complex:
    """g(t) = (cos(theta - i t) - cos theta) / t in its hyperbolic, cancellation-free form."""
    th = as_angle(theta)
    if t == 0.0:
        return complex(0.0, th.sin_theta)
    return complex(th.x * 2.0 * math.sinh(0.5 * t) ** 2 / t, th.sin_theta * math.sinh(t) / t)


def _sinh_minus_x(t: float) -> float:
    if abs(t) < 0.5:
        t2 = t * t
        term, total, k = t * t2 / 6.0, 0.0, 1
        while abs(term) > 1e-18 * abs(total) or total == 0.0:
            total += term
            k += 1
            term *= t2 / ((2 * k) * (2 * k + 1))
            if term == 0.0:
                break
        return total
    return math.sinh(t) - t


def _g_minus_g0(th: AnglePoint, t: float) -> complex:
    return complex(th.x * 2.0 * math.sinh(0.5 * t) ** 2, th.sin_theta * _sinh_minus_x(t)) / t


def kernel_dg(theta, t: float) -> complex:
    """d g / d t = (cos(th)(t sinh t - cosh t + 1) + i sin(th)(t cosh t - sinh t)) / t^2."""
    th = as_angle(theta)
    if t < 0.1:
        # Even/odd Taylor series of the two brackets divided by t^2.
        re_sum, im_sum = 0.0, 0.0
        t2 = t * t
        p = 1.0
        fact_even, fact_odd = 2.0, 6.0  # (2k)!, (2k+1)!
        for k in range(1, 12):
            re_sum += (2 * k - 1) * p / fact_even
            im_sum += 2 * k * p * t / fact_odd
            p *= t2
            fact_even *= (2 * k + 1) * (2 * k + 2)
            fact_odd *= (2 * k + 2) * (2 * k + 3)
        return complex(th.x * re_sum, th.sin_theta * im_sum)
    ch, sh = math.cosh(t), math.sinh(t)
    return complex(th.x * (t * sh - 2.0 * math.sinh(0.5 * t) ** 2), th.sin_theta * (t * ch - sh)) / (t * t)


def _clog1p(d: complex) -> complex:
    return complex(0.5 * math.log1p(2.0 * d.real + abs(d) ** 2), math.atan2(d.imag, 1.0 + d.real))


def _cexpm1(z: complex) -> complex:
    a, b = z.real, z.imag
    return complex(math.expm1(a) * math.cos(b) - 2.0 * math.sin(0.5 * b) ** 2, math.exp(a) * math.sin(b))


def kernel_f(lam: float, theta, t: float) -> complex:
    """f = (g(t)^(lam-1) - g(0)^(lam-1)) / t on the principal branch.

    Written as g0^(lam-1) expm1((lam-1) log1p(delta)) / t with
    delta = (g - g0)/g0, so no digits are lost as t -> 0.
    """
    if not lam > 0:
        raise DomainError(f"kernel needs lambda > 0, got {lam}")
    th = _interior(theta)
    if not t >= 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if lam == 1.0:
        return 0j
    g0 = complex(0.0, th.sin_theta)
    g0_pow = cmath.exp((lam - 1.0) * cmath.log(g0))
    if t == 0.0:
        return (lam - 1.0) * g0_pow / g0 * (0.5 * th.x)
    delta = _g_minus_g0(th, t) / g0
    return g0_pow * _cexpm1((lam - 1.0) * _clog1p(delta)) / t


def kernel_value(lam: float, theta, t: float) -> KernelValue:
    th = as_angle(theta)
    return KernelValue(kernel_g(th, t), kernel_f(lam, th, t), t, th.theta)


def f_bound(lam: float, theta, t: float) -> float:
    """Closed-form majorant of |f(lam, theta, t)|."""
    if not lam > 0:
        raise DomainError(f"kernel bound needs lambda > 0, got {lam}")
    th = _interior(theta)
    s = th.sin_theta
    cot = abs(th.x / s)
    base = s ** (lam - 1.0) * (cot + 2.0 * t / 3.0)
    if lam <= 2.0:
        return abs(lam - 1.0) * base * math.exp(t)
    extra = 1.0 + cot ** (lam - 2.0) / 2.0 ** (lam - 2.0) * t ** (lam - 2.0) * math.exp((lam - 2.0) * t)
    return 2.0 ** (0.5 * lam) * (lam - 1.0) * base * extra * math.exp((lam - 1.0) * t)


def _envelope(lam: float, nu: float, th: AnglePoint) -> tuple[float, float, float]:
    """(scale, polynomial degree, decay rate) dominating the residual integrand."""
    s = th.sin_theta
    cot = abs(th.x / s)
    if lam <= 2.0:
        scale = abs(lam - 1.0) * s ** (lam - 1.0) * (cot + 2.0 / 3.0)
        degree, rate = lam + 1.0, nu + lam - 1.0
    else:
        scale = (2.0 ** (0.5 * lam) * (lam - 1.0) * s ** (lam - 1.0) * (cot + 2.0 / 3.0)
                 * (1.0 + cot ** (lam - 2.0) / 2.0 ** (lam - 2.0)))
        degree, rate = 2.0 * lam - 1.0, nu + 3.0 - lam
    if rate <= 0:
        # The true integrand still decays like e^{-(nu + min(lam, 1)) t}.
        rate = 0.5 * (nu + min(lam, 1.0))
    return scale, degree, rate


def residual_integral(lam: float, nu: float, theta, quad_spec: QuadSpec = QuadSpec()) -> QuadResult:
    """R through its Laplace-type integral over the contour kernel f.

    The returned QuadResult carries R itself (prefactor applied) with a
    matching error estimate.
    """
    if not lam > 0:
        raise DomainError(f"residual needs lambda > 0, got {lam}")
    if not nu > 0:
        raise DomainError(f"residual needs nu > 0, got {nu}")
    th = _interior(theta)
    if lam == 1.0:
        return QuadResult(0.0, 0.0, 0, True)
    k = nu + lam
    phase = complex(0.0, 1.0) * cmath.exp(complex(0.0, -k * th.theta))

    def integrand(ts):
        out = np.empty_like(ts)
        for i, t in enumerate(ts):
            t = float(t)
            out[i] = (phase * kernel_f(lam, th, t)).real * t**lam * math.exp(-k * t)
        return out

    scale, degree, rate = _envelope(lam, nu, th)
    res = integrate_semiinfinite_expdecay(integrand, rate, degree, quad_spec, scale=scale)
    pref = math.exp(lam * _LN2 + math.lgamma(lam + 0.5) - _LN_SQRT_PI - math.lgamma(lam)) \
        * th.sin_theta ** (1.0 - lam)
    return res.scaled(pref)


def szego_leading(n: int, lam: float, theta) -> float:
    """Leading term for (sin t)^lam P_n^(a,a)(cos t), a = lam - 1/2, with the exact prefactor."""
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    th = _interior(theta)
    amp = math.exp(lam * _LN2 + math.lgamma(n + lam + 0.5) - _LN_SQRT_PI
                   - math.lgamma(n + 1.0) - lam * math.log(n + lam))
    return amp * math.cos((n + lam) * th.theta - 0.5 * lam * math.pi)


def jacobi_weighted(n: int, lam: float, theta) -> float:
    """(sin t)^lam P_n^(a,a)(cos t) from the normalized recurrence and P_n(1)."""
    th = as_angle(theta)
    p1 = math.exp(math.lgamma(n + lam + 0.5) - math.lgamma(lam + 0.5) - math.lgamma(n + 1.0))
    return th.sin_theta**lam * p1 * gegenbauer_integer(n, lam, th.x)
