"""Quadrature for endpoint-singular, semi-infinite and fractional integrals.

The workhorse is a double-exponential (tanh-sinh) rule.  Its nodes are
generated together with their exact distances to both interval ends, so
integrands with singular factors like (b - x)^p can be evaluated without
forming ``b - x`` by subtraction.  Integrands passed to the tanh-sinh
routines therefore receive ``(x, dist_to_a, dist_to_b)`` numpy arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .ggf import evaluate
from .params import AnglePoint, GgfParams

__all__ = [
    "QuadMethod",
    "QuadSpec",
    "QuadResult",
    "tanh_sinh",
    "adaptive_gauss",
    "integrate_endpoint_singular",
    "integrate_semiinfinite_expdecay",
    "truncation_point",
    "mehler_integral",
    "mehler_prefactor",
    "rl_fractional_integral_right",
    "gegenbauer_weighted_integrand",
]

_T_MAX = 6.0
_MIN_LEVEL = 3
_EPS = np.finfo(float).eps


class QuadMethod(str, enum.Enum):
    TANH_SINH = "tanh_sinh"
    ADAPTIVE_GAUSS = "adaptive_gauss"
    TRUNCATED_ADAPTIVE = "truncated_adaptive"


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_refinements: int = 12
    method: QuadMethod = QuadMethod.TANH_SINH

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be at least 1")
        object.__setattr__(self, "method", QuadMethod(self.method))

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value,
                          self.error_estimate + other.error_estimate,
                          self.evaluations + other.evaluations,
                          self.converged and other.converged)

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(factor * self.value, abs(factor) * self.error_estimate,
                          self.evaluations, self.converged)

    def require(self, what: str = "integral") -> "QuadResult":
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge (estimate {self.value!r}, "
                f"error {self.error_estimate:.3g}, {self.evaluations} evaluations)",
                estimate=self.value)
        return self


Integrand3 = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _ts_nodes(ts: np.ndarray, a: float, b: float):
    """Abscissae, endpoint distances and weights (without the step h)."""
    half = 0.5 * (b - a)
    u = 0.5 * math.pi * np.sinh(ts)
    e = np.exp(-2.0 * np.abs(u))
    # Distance to the nearer end is (b - a) e / (1 + e); the farther end gets the rest.
    near = (b - a) * e / (1.0 + e)
    far = (b - a) / (1.0 + e)
    da = np.where(u < 0, near, far)
    db = np.where(u < 0, far, near)
    x = np.where(u < 0, a + da, b - db)
    w = half * 0.5 * math.pi * np.cosh(ts) * 4.0 * e / (1.0 + e) ** 2
    return x, da, db, w


def _ts_level_sum(f: Integrand3, ts: np.ndarray, a: float, b: float):
    x, da, db, w = _ts_nodes(ts, a, b)
    keep = (da > 0) & (db > 0) & (w > 0)
    if not np.any(keep):
        return 0.0, 0.0, 0
    vals = np.asarray(f(x[keep], da[keep], db[keep]), dtype=float)
    wf = w[keep] * vals
    if not np.all(np.isfinite(wf)):
        raise ConvergenceError("integrand returned a non-finite value at a quadrature node")
    return float(np.sum(wf)), float(np.sum(np.abs(wf))), int(keep.sum())


def tanh_sinh(f: Integrand3, a: float, b: float, spec: QuadSpec = QuadSpec()) -> QuadResult:
    """Double-exponential rule on [a, b]; halves the step until two levels agree."""
    if not b > a:
        raise DomainError(f"empty or reversed interval [{a}, {b}]")
    h = 1.0
    ts = np.arange(-_T_MAX, _T_MAX + 0.5 * h, h)
    total, abs_total, evals = _ts_level_sum(f, ts, a, b)
    estimate = h * total
    err = math.inf
    for level in range(1, spec.max_refinements + 1):
        h *= 0.5
        ts = np.arange(-_T_MAX + h, _T_MAX, 2.0 * h)
        s, sa, n = _ts_level_sum(f, ts, a, b)
        total += s
        abs_total += sa
        evals += n
        new = h * total
        err = max(abs(new - estimate), 4.0 * _EPS * h * abs_total)
        estimate = new
        if level >= _MIN_LEVEL and err <= spec.target(estimate):
            return QuadResult(estimate, err, evals, True)
    return QuadResult(estimate, err, evals, False)


_GL_LOW = np.polynomial.legendre.leggauss(10)
_GL_HIGH = np.polynomial.legendre.leggauss(20)


def _gl(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, rule) -> float:
    x, w = rule
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def adaptive_gauss(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   spec: QuadSpec = QuadSpec()) -> QuadResult:
    """Globally adaptive bisection with a 10/20-point Gauss-Legendre pair."""
    if not b > a:
        raise DomainError(f"empty or reversed interval [{a}, {b}]")
    max_panels = 2 ** min(spec.max_refinements, 14)

    def panel(lo, hi):
        fine = _gl(f, lo, hi, _GL_HIGH)
        return (abs(fine - _gl(f, lo, hi, _GL_LOW)), lo, hi, fine)

    panels = [panel(a, b)]
    evals = 30
    while True:
        value = sum(p[3] for p in panels)
        err = sum(p[0] for p in panels)
        if err <= spec.target(value):
            return QuadResult(value, err, evals, True)
        if len(panels) >= max_panels:
            return QuadResult(value, err, evals, False)
        panels.sort(key=lambda p: p[0])
        _, lo, hi, _ = panels.pop()
        mid = 0.5 * (lo + hi)
        panels += [panel(lo, mid), panel(mid, hi)]
        evals += 60


def integrate_endpoint_singular(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                                a: float, b: float, singular_exponent_at_b: float,
                                spec: QuadSpec = QuadSpec()) -> QuadResult:
    """Integrate f over [a, b] where f ~ (b - x)^p near b with p > -1.

    ``f(x, dist_to_b)`` gets the exact distance to b so the singular factor
    can be formed without cancellation.
    """
    if not singular_exponent_at_b > -1.0:
        raise DomainError(f"singular exponent must exceed -1, got {singular_exponent_at_b}")
    if not b > a:
        raise DomainError(f"empty or reversed interval [{a}, {b}]")
    if spec.method is QuadMethod.TANH_SINH:
        return tanh_sinh(lambda x, da, db: f(x, db), a, b, spec)
    return adaptive_gauss(lambda x: f(x, b - x), a, b, spec)


def truncation_point(decay_rate: float, poly_degree: float, target: float, scale: float = 1.0) -> float:
    """Smallest T (found by bisection in log form) with scale * T^p e^{-aT} / a below target.

    Beyond max(p/a, 1/a) the envelope decreases monotonically, so this bounds
    the dropped tail up to a modest constant.
    """
    a, p = decay_rate, poly_degree
    start = max(p / a, 1.0 / a)

    def log_env(t):
        return math.log(scale) + p * math.log(t) - a * t - math.log(a)

    log_target = math.log(target)
    if log_env(start) <= log_target:
        return start
    lo, hi = start, 2.0 * start
    while log_env(hi) > log_target:
        lo, hi = hi, 2.0 * hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if log_env(mid) > log_target:
            lo = mid
        else:
            hi = mid
    return hi


def integrate_semiinfinite_expdecay(f: Callable[[np.ndarray], np.ndarray], decay_rate: float,
                                    poly_degree_hint: float, spec: QuadSpec = QuadSpec(),
                                    scale: float = 1.0) -> QuadResult:
    """Integrate f over [0, inf) given |f(t)| <= scale * t^p * e^{-rate t} for large t.

    The range is cut where the envelope tail drops below a hundredth of the
    tolerance, then covered with panels whose widths double from 1/rate.
    The first panel is tanh-sinh so a t^lambda start is handled.
    """
    if not decay_rate > 0:
        raise DomainError(f"decay rate must be positive, got {decay_rate}")
    if not poly_degree_hint >= 0:
        raise DomainError(f"polynomial degree hint must be non-negative, got {poly_degree_hint}")
    if scale == 0.0:
        return QuadResult(0.0, 0.0, 0, True)
    envelope_total = scale * math.exp(math.lgamma(poly_degree_hint + 1.0)
                                      - (poly_degree_hint + 1.0) * math.log(decay_rate))
    target = 1e-2 * min(spec.abs_tol, spec.rel_tol * envelope_total)
    T = truncation_point(decay_rate, poly_degree_hint, target, scale)
    edges = [0.0]
    width = 1.0 / decay_rate
    while edges[-1] < T:
        edges.append(min(edges[-1] + width, T))
        width *= 2.0
    result = QuadResult(0.0, 0.0, 0, True)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if spec.method is QuadMethod.TANH_SINH or lo == 0.0:
            part = tanh_sinh(lambda x, da, db: f(x) if lo else f(da), lo, hi, spec)
        else:
            part = adaptive_gauss(f, lo, hi, spec)
        result = result + part
    return result


def mehler_prefactor(lam: float) -> float:
    """2^lam Gamma(lam + 1/2) / (sqrt(pi) Gamma(lam))."""
    return math.exp(lam * math.log(2.0) + math.lgamma(lam + 0.5)
                    - 0.5 * math.log(math.pi) - math.lgamma(lam))


def mehler_integral(lam: float, nu: float, phi: float, spec: QuadSpec = QuadSpec()) -> QuadResult:
    """(sin phi)^(2 lam - 1) G_nu^lam(cos phi) through its Mehler-type integral.

    Near the singular end the kernel uses
    cos(v) - cos(phi) = 2 sin(d/2) sin(phi - d/2) with d = phi - v.
    """
    if not lam > 0:
        raise DomainError(f"integral representation needs lambda > 0, got {lam}")
    if not nu >= 0:
        raise DomainError(f"nu must be non-negative, got {nu}")
    if not 0.0 <= phi <= math.pi:
        raise DomainError(f"phi must lie in [0, pi], got {phi}")
    if phi < 1e-8:
        return QuadResult(0.0, 0.0, 0, True)
    k = nu + lam

    def integrand(v, d):
        gap = 2.0 * np.sin(0.5 * d) * np.sin(phi - 0.5 * d)
        return np.cos(k * v) * gap ** (lam - 1.0)

    res = integrate_endpoint_singular(integrand, 0.0, phi, lam - 1.0, spec)
    return res.scaled(mehler_prefactor(lam))


def rl_fractional_integral_right(u: Callable[[np.ndarray, np.ndarray], np.ndarray], s: float, x: float,
                                 spec: QuadSpec = QuadSpec()) -> QuadResult:
    """Right-sided Riemann-Liouville integral (1/Gamma(s)) int_x^1 u(y) (y - x)^(s-1) dy.

    ``u(y, one_minus_y)`` receives 1 - y exactly.  The range is split at the
    midpoint so each half carries at most one singular end.
    """
    if not s > 0:
        raise DomainError(f"fractional order must be positive, got {s}")
    if not -1.0 < x < 1.0:
        raise DomainError(f"x must lie in (-1, 1), got {x}")
    length = 1.0 - x
    mid = x + 0.5 * length

    def left(y, da, db):
        return u(y, length - da) * da ** (s - 1.0)

    def right(y, da, db):
        return u(y, db) * (length - db) ** (s - 1.0)

    if spec.method is QuadMethod.TANH_SINH:
        res = tanh_sinh(left, x, mid, spec) + tanh_sinh(right, mid, 1.0, spec)
    else:
        res = (adaptive_gauss(lambda y: u(y, 1.0 - y) * (y - x) ** (s - 1.0), x, mid, spec)
               + adaptive_gauss(lambda y: u(y, 1.0 - y) * (y - x) ** (s - 1.0), mid, 1.0, spec))
    return res.scaled(1.0 / math.gamma(s))


def gegenbauer_weighted_integrand(lam: float, nu: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """y -> (1 - y^2)^(lam - 1/2) G_nu^lam(y), built from 1 - y for endpoint accuracy."""
    params = GgfParams(lam, nu)

    def u(y, one_minus_y):
        out = np.empty_like(y)
        for i, (yy, om) in enumerate(zip(y, one_minus_y)):
            point = AnglePoint.from_x(float(yy), float(om))
            out[i] = (om * (2.0 - om)) ** (lam - 0.5) * evaluate(params, point)
        return out

    return u
