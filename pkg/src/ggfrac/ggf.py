"""Evaluation of generalized Gegenbauer functions of fractional degree.

``evaluate`` dispatches on the parameters:

* lambda = 0 and lambda = 1 have trigonometric closed forms;
* integer degrees use the three-term recurrence from G_0 = 1, G_1 = x;
* fractional degrees start from the two lowest degrees of the same
  fractional part (summed as hypergeometric series, or through the 1 - z
  connection formulas near x = -1) and run the degree recurrence upward.

The plain series is exposed separately as ``hypergeom.ggf_series``; it loses
roughly ``log10(cosh(2 nu asinh(sin(theta/2))))`` digits to cancellation and
is unusable on its own once nu reaches a few tens.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DivergenceError, DomainError
from .hypergeom import (
    SeriesPolicy,
    _dd_add,
    _dd_div,
    _dd_mul,
    _two_sum,
    SeriesResult,
    cospi,
    floor_parity,
    gauss_2f1_complement,
    gauss_2f1_truncated,
    pochhammer,
    sinpi,
)
from .params import AnglePoint, GgfParams, Side, as_angle

__all__ = [
    "EndpointKind",
    "EndpointBehavior",
    "evaluate",
    "derivative",
    "derivative_coefficient",
    "recurrence_nu_step",
    "recurrence_lambda_mix",
    "recurrence_lambda_mix_terms",
    "series_representation_p43",
    "endpoint_minus_one",
    "sturm_liouville_residual",
    "gegenbauer_integer",
]

DEFAULT_POLICY = SeriesPolicy()
# Above this z the seeds switch to the 1 - z connection formulas.
_COMPLEMENT_SWITCH = 0.5


def _direct_threshold(lam: float) -> float:
    """Largest nu^2 (1 + x)/2 at which the target degree is summed directly.

    The connection series loses about exp(2 nu sqrt(w)) to cancellation while
    the upward recurrence amplifies seed errors near x = -1 roughly like a
    power of nu growing with lambda; these cut-offs balance the two.
    """
    if lam <= 2.0:
        return 9.0
    return 25.0 if lam <= 5.0 else 36.0


class EndpointKind(str, enum.Enum):
    FINITE_VALUE = "finite_value"
    LOG_DIVERGENT = "log_divergent"
    POWER_DIVERGENT = "power_divergent"


@dataclass(frozen=True)
class EndpointBehavior:
    """Behaviour of the right function at x = -1.

    ``value`` is the finite limit, the coefficient of ln(1 + x), or the
    weighted limit Q of ((1 + x)/2)^(lambda - 1/2) G, depending on ``kind``.
    """

    kind: EndpointKind
    value: float


def _is_int(v: float) -> bool:
    return v == math.floor(v)


def endpoint_minus_one(lam: float, nu: float) -> EndpointBehavior:
    if not lam > -0.5:
        raise DomainError(f"lambda must exceed -1/2, got {lam}")
    if not nu >= 0:
        raise DomainError(f"nu must be non-negative, got {nu}")
    if _is_int(nu):
        return EndpointBehavior(EndpointKind.FINITE_VALUE, -1.0 if int(nu) % 2 else 1.0)
    if lam < 0.5:
        return EndpointBehavior(EndpointKind.FINITE_VALUE, cospi(nu + lam) / cospi(lam))
    if lam == 0.5:
        return EndpointBehavior(EndpointKind.LOG_DIVERGENT, sinpi(nu) / math.pi)
    return EndpointBehavior(EndpointKind.POWER_DIVERGENT, weighted_limit_q(lam, nu))


def weighted_limit_q(lam: float, nu: float) -> float:
    """Q = -(sin(nu pi)/pi) Gamma(lam-1/2) Gamma(lam+1/2) Gamma(nu+1) / Gamma(nu+2 lam)."""
    s = sinpi(nu)
    if s == 0.0:
        return 0.0
    lg = (math.lgamma(lam - 0.5) + math.lgamma(lam + 0.5)
          + math.lgamma(nu + 1.0) - math.lgamma(nu + 2.0 * lam))
    return -s / math.pi * math.exp(lg)


def gegenbauer_integer(n: int, lam: float, x: float) -> float:
    """Normalized Gegenbauer polynomial G_n(x) = P_n^(a,a)(x) / P_n^(a,a)(1), a = lam - 1/2."""
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a non-negative integer, got {n}")
    if not lam > -0.5:
        raise DomainError(f"lambda must exceed -1/2, got {lam}")
    n = int(n)
    if n == 0:
        return 1.0
    g_prev, g = 1.0, x
    for k in range(1, n):
        g_prev, g = g, (2.0 * (k + lam) * x * g - k * g_prev) / (k + 2.0 * lam)
    return g


def recurrence_nu_step(lam: float, nu: float, x: float, g_nu: float, g_nu_minus_1: float) -> float:
    """Next degree from the two previous ones: returns G_{nu+1}."""
    if nu < 1:
        raise DomainError(f"degree recurrence needs nu >= 1, got {nu}")
    denom = nu + 2.0 * lam
    if denom == 0.0:
        raise DomainError("degenerate recurrence coefficient nu + 2 lambda = 0")
    return (2.0 * (nu + lam) * x * g_nu - nu * g_nu_minus_1) / denom


def _seed(lam: float, mu: float, th: AnglePoint, policy: SeriesPolicy) -> float:
    a, b, c = -mu, mu + 2.0 * lam, lam + 0.5
    z = th.z
    if z <= _COMPLEMENT_SWITCH:
        res = gauss_2f1_truncated(a, b, c, z, policy)
    else:
        res = gauss_2f1_complement(a, b, c, th.w, policy)
    if not res.converged:
        raise ConvergenceError(
            f"series for G_{mu}^({lam}) at theta={th.theta} did not converge "
            f"({res.terms_used} terms, cancellation {res.cancellation:.3g})",
            estimate=res.value)
    return res.value


def _fractional(lam: float, nu: float, th: AnglePoint, policy: SeriesPolicy) -> float:
    if th.z > _COMPLEMENT_SWITCH and nu * nu * th.w <= _direct_threshold(lam):
        # Near x = -1 the right function is recessive in nu for lam > 1/2;
        # the connection series converges fast here, so skip the recurrence.
        try:
            return _seed(lam, nu, th, policy)
        except ConvergenceError:
            pass
    steps = int(math.floor(nu))
    mu0 = nu - steps
    g_prev = _seed(lam, mu0, th, policy)
    if steps == 0:
        return g_prev
    g = _seed(lam, mu0 + 1.0, th, policy)
    x = th.x
    mu = mu0 + 1.0
    for _ in range(steps - 1):
        g_prev, g = g, (2.0 * (mu + lam) * x * g - mu * g_prev) / (mu + 2.0 * lam)
        mu += 1.0
    return g


def _evaluate_right(lam: float, nu: float, th: AnglePoint, policy: SeriesPolicy) -> float:
    theta = th.theta
    if theta == 0.0 or nu == 0.0:
        return 1.0
    if theta == math.pi:
        behavior = endpoint_minus_one(lam, nu)
        if behavior.kind is EndpointKind.FINITE_VALUE:
            return behavior.value
        raise DivergenceError(
            f"G_{nu}^({lam}) is infinite at x = -1 ({behavior.kind.value})", behavior)
    if lam == 0.0:
        return math.cos(nu * theta)
    if lam == 1.0:
        return math.sin((nu + 1.0) * theta) / ((nu + 1.0) * math.sin(theta))
    if _is_int(nu):
        return gegenbauer_integer(int(nu), lam, th.x)
    return _fractional(lam, nu, th, policy)


def evaluate(params: GgfParams, theta: AnglePoint | float,
             policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Value of the right or left GGF-F at x = cos(theta).

    Raises DivergenceError at the singular endpoint and ConvergenceError if
    a seed series fails.
    """
    th = as_angle(theta)
    if params.side is Side.LEFT:
        return floor_parity(params.nu) * _evaluate_right(params.lam, params.nu, th.reflected(), policy)
    return _evaluate_right(params.lam, params.nu, th, policy)


def derivative_coefficient(lam: float, nu: float, k: int) -> float:
    """(-1)^k (-nu)_k (nu + 2 lam)_k / (2^k (lam + 1/2)_k)."""
    return ((-1) ** k * pochhammer(-nu, k) * pochhammer(nu + 2.0 * lam, k)
            / (2.0**k * pochhammer(lam + 0.5, k)))


def derivative(params: GgfParams, theta: AnglePoint | float, k: int,
               policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """k-th derivative in x, through the shifted function G_{nu-k}^(lam+k)."""
    if k < 1 or int(k) != k:
        raise DomainError(f"derivative order must be a positive integer, got {k}")
    if params.nu < k:
        raise DomainError(f"derivative of order {k} needs nu >= {k}, got nu={params.nu}")
    th = as_angle(theta)
    coef = derivative_coefficient(params.lam, params.nu, k)
    if coef == 0.0:
        return 0.0
    shifted = params.lam + k, params.nu - k
    if params.side is Side.LEFT:
        sign = floor_parity(params.nu) * (-1) ** k
        return sign * coef * _evaluate_right(*shifted, th.reflected(), policy)
    return coef * _evaluate_right(*shifted, th, policy)


def recurrence_lambda_mix_terms(lam: float, nu: float, theta: AnglePoint | float,
                                policy: SeriesPolicy = DEFAULT_POLICY) -> tuple[float, float, float]:
    """The three pieces (G_nu^lam, x G_{nu-1}^{lam+1}, c (1-x^2) G_{nu-2}^{lam+2})."""
    if nu < 2:
        raise DomainError(f"parameter-shift recurrence needs nu >= 2, got {nu}")
    th = as_angle(theta)
    x = th.x
    coef = (nu - 1.0) * (nu + 2.0 * lam + 1.0) / (4.0 * (lam + 0.5) * (lam + 1.5))
    lhs = _evaluate_right(lam, nu, th, policy)
    t1 = x * _evaluate_right(lam + 1.0, nu - 1.0, th, policy)
    t2 = coef * th.sin_theta**2 * _evaluate_right(lam + 2.0, nu - 2.0, th, policy)
    return lhs, t1, t2


def recurrence_lambda_mix(lam: float, nu: float, theta: AnglePoint | float,
                          policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Signed residual G_nu^lam - x G_{nu-1}^{lam+1} + c (1 - x^2) G_{nu-2}^{lam+2}."""
    lhs, t1, t2 = recurrence_lambda_mix_terms(lam, nu, theta, policy)
    return lhs - (t1 - t2)


def series_representation_p43(params: GgfParams, theta: AnglePoint | float,
                              max_k: int = 10000, rel_tol: float = 1e-17) -> SeriesResult:
    """Binomial-kernel expansion in powers of (x - 1)^k (1 + x)^(nu - k).

    Factoring out the k = 0 term, which collapses to ((1 + x)/2)^nu, leaves
    sum_k c_k r^k with r = (x - 1)/(1 + x) = -tan^2(theta/2) and
    c_{k+1}/c_k = (nu - k)(alpha - k) / ((lam + 1/2 + k)(k + 1)),
    alpha = nu + lam - 1/2.  The terms cancel by up to (1 + sin theta)^nu,
    so coefficients and partial sums are carried in double-double.  The sum
    converges for theta < pi/2.
    """
    th = as_angle(theta)
    if params.side is Side.LEFT:
        res = series_representation_p43(params.with_side(Side.RIGHT), th.reflected(), max_k, rel_tol)
        s = floor_parity(params.nu)
        return SeriesResult(s * res.value, res.terms_used, res.tail_bound, res.converged, res.abs_sum)
    lam, nu = params.lam, params.nu
    if not 0.0 < th.theta < math.pi:
        raise DomainError("series representation needs theta in (0, pi)")
    w = th.w
    lead = w**nu
    if nu == 0.0:
        return SeriesResult(1.0, 1, 0.0, True, 1.0)
    rh, rl = _dd_div(-th.z, 0.0, w, 0.0)
    lam_minus, lam_plus = _two_sum(lam, -0.5), _two_sum(lam, 0.5)
    th_, tl = 1.0, 0.0
    sh, sl = 1.0, 0.0
    abs_sum = 1.0
    small = 0
    k = 0
    while k < max_k:
        a = _two_sum(nu, -float(k))
        if a == (0.0, 0.0):
            return SeriesResult(lead * (sh + sl), k + 1, 0.0, True, lead * abs_sum)
        alpha_k = _dd_add(*a, *lam_minus)
        num = _dd_mul(*a, *alpha_k)
        den = _dd_mul(*_dd_add(*lam_plus, float(k), 0.0), float(k + 1), 0.0)
        ratio = _dd_mul(*_dd_div(*num, *den), rh, rl)
        th_, tl = _dd_mul(th_, tl, *ratio)
        sh, sl = _dd_add(sh, sl, th_, tl)
        abs_sum += abs(th_)
        k += 1
        if abs(th_) <= rel_tol * abs(sh):
            small += 1
            if small >= 3:
                return SeriesResult(lead * (sh + sl), k + 1, lead * abs(th_), True, lead * abs_sum)
        else:
            small = 0
    return SeriesResult(lead * (sh + sl), k + 1, lead * abs(th_), False, lead * abs_sum)


def sturm_liouville_residual(params: GgfParams, theta: AnglePoint | float,
                             policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Normalized residual of (1-x^2) G'' - (2 lam + 1) x G' + nu (nu + 2 lam) G."""
    lam, nu = params.lam, params.nu
    if nu < 2:
        raise DomainError(f"ODE residual needs nu >= 2, got {nu}")
    th = as_angle(theta)
    if not 0.0 < th.theta < math.pi:
        raise DomainError("ODE residual needs theta in (0, pi)")
    g = evaluate(params, th, policy)
    d1 = derivative(params, th, 1, policy)
    d2 = derivative(params, th, 2, policy)
    ev = nu * (nu + 2.0 * lam)
    lhs = th.sin_theta**2 * d2 - (2.0 * lam + 1.0) * th.x * d1 + ev * g
    return lhs / (ev * max(abs(g), 1.0))
