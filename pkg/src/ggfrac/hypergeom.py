"""Scalar kernels: log-Gamma, Pochhammer symbols and truncated Gauss series.

All routines work in binary64.  The truncated series driver can escalate to
double-double accumulation when the partial sums cancel badly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.special import psi

from .errors import DomainError
from .params import AnglePoint, GgfParams, Side, as_angle

__all__ = [
    "Accumulation",
    "SeriesPolicy",
    "SeriesResult",
    "ln_gamma",
    "gamma_signed",
    "rgamma",
    "pochhammer",
    "sinpi",
    "cospi",
    "gauss_2f1_truncated",
    "gauss_2f1_complement",
    "ggf_series",
    "floor_parity",
]

# Cancellation budget: sum(|term|) may exceed |value| by at most this factor.
CANCELLATION_BUDGET = 1e8
_DD_GAIN = 2.0**53
# Closer than this to an integer, c - a - b is treated as degenerate.
_DEGENERATE_EPS = 1e-9
_CONSECUTIVE_SMALL = 3


class Accumulation(str, enum.Enum):
    STANDARD = "standard"
    COMPENSATED = "compensated"
    DOUBLE_DOUBLE = "double_double"


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation and accumulation settings for power-series evaluation."""

    rel_tol: float = 1e-15
    max_terms: int = 10000
    accumulation: Accumulation = Accumulation.STANDARD

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")
        object.__setattr__(self, "accumulation", Accumulation(self.accumulation))


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float
    converged: bool
    abs_sum: float = math.nan

    @property
    def cancellation(self) -> float:
        """Ratio sum(|term|) / |value| (inf for a zero value)."""
        if self.value == 0.0:
            return math.inf if self.abs_sum > 0 else 1.0
        return self.abs_sum / abs(self.value)


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_signed(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign Gamma(x))``.

    Negative non-integer arguments go through the reflection formula.
    Raises DomainError at the poles x = 0, -1, -2, ...
    """
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma has a pole at {x}")
    if x > 0:
        return math.lgamma(x), 1
    # Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    s = sinpi(x)
    return math.log(math.pi) - math.log(abs(s)) - math.lgamma(1.0 - x), (1 if s > 0 else -1)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpositive_integer(x):
        return 0.0
    lg, sg = gamma_signed(x)
    return sg * math.exp(-lg)


def _gamma_ratio(num: list[float], den: list[float]) -> float:
    """prod Gamma(num) / prod Gamma(den); zero if any denominator is a pole."""
    if any(_is_nonpositive_integer(d) for d in den):
        return 0.0
    log_mag = 0.0
    sign = 1
    for v in num:
        lg, sg = gamma_signed(v)
        log_mag += lg
        sign *= sg
    for v in den:
        lg, sg = gamma_signed(v)
        log_mag -= lg
        sign *= sg
    return sign * math.exp(log_mag)


def sinpi(x: float) -> float:
    """sin(pi x) with exact zeros at integers."""
    r = math.fmod(x, 2.0)
    if r == math.floor(r):
        return 0.0
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    # r in (-1, 1); fold to [-1/2, 1/2] for accuracy
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi x) with exact zeros at half-integers."""
    return sinpi(x + 0.5) if abs(x) < 2**50 else math.cos(math.pi * x)


def pochhammer(a: float, j: int) -> float:
    """Rising factorial (a)_j built by repeated multiplication."""
    if j < 0:
        raise DomainError(f"pochhammer needs j >= 0, got {j}")
    out = 1.0
    for i in range(j):
        out *= a + i
        if out == 0.0:
            break
    return out


# ---------------------------------------------------------------------------
# Accumulators
# ---------------------------------------------------------------------------

def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    e += xl + yl
    return _two_sum(s, e)


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    e += xh * yl + xl * yh
    return _two_sum(p, e)


def _dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    ph, pl = _dd_mul(q1, 0.0, yh, yl)
    rh, rl = _dd_add(xh, xl, -ph, -pl)
    q2 = rh / yh
    return _two_sum(q1, q2)


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self, start: float):
        self.s = start
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


# ---------------------------------------------------------------------------
# Truncated Gauss series
# ---------------------------------------------------------------------------

def _check_c(c: float) -> None:
    if _is_nonpositive_integer(c):
        raise DomainError(f"2F1 lower parameter c={c} is a pole (-c in N0)")


def _sum_float(a, b, c, z, policy, compensated):
    acc = _Neumaier(1.0) if compensated else None
    total = 1.0
    abs_sum = 1.0
    term = 1.0
    small = 0
    j = 0
    while j < policy.max_terms:
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        j += 1
        if term == 0.0:
            return total if acc is None else acc.value, j, 0.0, True, abs_sum
        if acc is None:
            total += term
        else:
            acc.add(term)
            total = acc.s
        abs_sum += abs(term)
        if abs(term) <= policy.rel_tol * abs(total):
            small += 1
            if small >= _CONSECUTIVE_SMALL:
                break
        else:
            small = 0
    value = total if acc is None else acc.value
    tail = abs(term * (a + j) * (b + j) / ((c + j) * (j + 1)) * z)
    converged = small >= _CONSECUTIVE_SMALL and (tail <= policy.rel_tol * abs(value) or value == 0.0)
    return value, j + 1, tail, converged, abs_sum


def _sum_dd(a, b, c, z, policy):
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    abs_sum = 1.0
    small = 0
    j = 0
    while j < policy.max_terms:
        ah, al = _two_sum(a, float(j))
        bh, bl = _two_sum(b, float(j))
        ch, cl = _two_sum(c, float(j))
        nh, nl = _dd_mul(ah, al, bh, bl)
        nh, nl = _dd_mul(nh, nl, z, 0.0)
        dh, dl = _dd_mul(ch, cl, float(j + 1), 0.0)
        rh, rl = _dd_div(nh, nl, dh, dl)
        th, tl = _dd_mul(th, tl, rh, rl)
        j += 1
        if th == 0.0:
            return sh + sl, j, 0.0, True, abs_sum
        sh, sl = _dd_add(sh, sl, th, tl)
        abs_sum += abs(th)
        if abs(th) <= policy.rel_tol * abs(sh):
            small += 1
            if small >= _CONSECUTIVE_SMALL:
                break
        else:
            small = 0
    value = sh + sl
    tail = abs(th * (a + j) * (b + j) / ((c + j) * (j + 1)) * z)
    converged = small >= _CONSECUTIVE_SMALL and (tail <= policy.rel_tol * abs(value) or value == 0.0)
    return value, j + 1, tail, converged, abs_sum


def gauss_2f1_truncated(a: float, b: float, c: float, z: float,
                        policy: SeriesPolicy = SeriesPolicy()) -> SeriesResult:
    """Sum 2F1(a, b; c; z) term by term.

    Stops once three consecutive terms fall below ``rel_tol * |partial sum|``
    or the series terminates.  If ``sum |term|`` exceeds the cancellation
    budget the sum is redone in double-double; a result that still exceeds
    the (double-double) budget is returned with ``converged=False``.
    """
    _check_c(c)
    if abs(z) >= 1.0 and not (_is_nonpositive_integer(a) or _is_nonpositive_integer(b)):
        raise DomainError(f"2F1 series needs |z| < 1 unless it terminates, got z={z}")

    mode = policy.accumulation
    if mode is Accumulation.DOUBLE_DOUBLE:
        value, used, tail, conv, abs_sum = _sum_dd(a, b, c, z, policy)
        budget = CANCELLATION_BUDGET * _DD_GAIN
    else:
        value, used, tail, conv, abs_sum = _sum_float(
            a, b, c, z, policy, mode is Accumulation.COMPENSATED)
        budget = CANCELLATION_BUDGET
        if abs_sum > budget * abs(value):
            value, used, tail, conv, abs_sum = _sum_dd(a, b, c, z, policy)
            budget = CANCELLATION_BUDGET * _DD_GAIN
    if abs_sum > budget * abs(value):
        conv = False
    return SeriesResult(value, used, tail, conv, abs_sum)


def gauss_2f1_complement(a: float, b: float, c: float, w: float,
                         policy: SeriesPolicy = SeriesPolicy()) -> SeriesResult:
    """Evaluate 2F1(a, b; c; 1 - w) for 0 < w <= 1/2 by the 1 - z connection.

    The argument is passed as its complement ``w`` so that points close to
    z = 1 keep full relative accuracy.  Integer ``c - a - b`` switches to the
    logarithmic connection formulas.
    """
    _check_c(c)
    if not 0.0 < w < 1.0:
        raise DomainError(f"complement argument must lie in (0, 1), got {w}")
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return gauss_2f1_truncated(a, b, c, 1.0 - w, policy)

    s = c - a - b
    m = round(s)
    if abs(s - m) <= _DEGENERATE_EPS * max(1.0, abs(s)):
        return _complement_log(a, b, c, w, int(m), policy)

    f1 = gauss_2f1_truncated(a, b, 1.0 - s, w, policy)
    f2 = gauss_2f1_truncated(c - a, c - b, 1.0 + s, w, policy)
    k1 = _gamma_ratio([c, s], [c - a, c - b])
    k2 = _gamma_ratio([c, -s], [a, b])
    t1 = k1 * f1.value
    t2 = k2 * w**s * f2.value
    value = t1 + t2
    abs_sum = abs(k1) * f1.abs_sum + abs(k2) * w**s * f2.abs_sum
    tail = abs(k1) * f1.tail_bound + abs(k2) * w**s * f2.tail_bound
    conv = f1.converged and f2.converged and abs_sum <= CANCELLATION_BUDGET * abs(value)
    return SeriesResult(value, f1.terms_used + f2.terms_used, tail, conv, abs_sum)


def _complement_log(a, b, c, w, m, policy):
    """Degenerate connection with c = a + b + m (m may be negative or zero)."""
    if m < 0:
        # c = a + b - k: the (1-z)^{-k} part is a finite sum
        k = -m
        finite = 0.0
        if k > 0:
            coef = math.gamma(k) * _gamma_ratio([c], [a, b]) * w**(-k)
            term = 1.0
            finite = term
            for n in range(1, k):
                term *= (a - k + n - 1) * (b - k + n - 1) / (n * (1 - k + n - 1)) * w
                finite += term
            finite *= coef
        pref = -((-1) ** k) * _gamma_ratio([c], [a - k, b - k])
        start = 1.0 / math.factorial(k)
        log_sum, used, tail, conv, abs_log = _log_series(
            a, b, k, w, start, psi(a), psi(b), policy)
        value = finite + pref * log_sum
        abs_sum = abs(finite) + abs(pref) * abs_log
        tail = abs(pref) * tail
    else:
        # c = a + b + m, m >= 0 (m = 0 has an empty finite part)
        finite = 0.0
        if m > 0:
            coef = math.gamma(m) * _gamma_ratio([c], [a + m, b + m])
            term = 1.0
            finite = term
            for n in range(1, m):
                term *= (a + n - 1) * (b + n - 1) / (n * (1 - m + n - 1)) * w
                finite += term
            finite *= coef
        pref = -((-w) ** m) * _gamma_ratio([c], [a, b])
        start = 1.0 / math.factorial(m)
        log_sum, used, tail, conv, abs_log = _log_series(
            a + m, b + m, m, w, start, psi(a + m), psi(b + m), policy)
        value = finite + pref * log_sum
        abs_sum = abs(finite) + abs(pref) * abs_log
        tail = abs(pref) * tail
    conv = conv and abs_sum <= CANCELLATION_BUDGET * abs(value)
    return SeriesResult(value, used, tail, conv, abs_sum)


def _log_series(p, q, m, w, start, psi_p, psi_q, policy):
    """sum_n (p)_n (q)_n / (n! (n+m)!) w^n [ln w - psi(n+1) - psi(n+m+1) + psi(p+n) + psi(q+n)]."""
    lw = math.log(w)
    psi_1 = float(psi(1.0))
    psi_m1 = float(psi(m + 1.0))
    psi_p = float(psi_p)
    psi_q = float(psi_q)
    coef = start
    total = coef * (lw - psi_1 - psi_m1 + psi_p + psi_q)
    abs_sum = abs(total)
    small = 0
    n = 0
    term = total
    while n < policy.max_terms:
        coef *= (p + n) * (q + n) / ((n + 1) * (n + m + 1)) * w
        psi_1 += 1.0 / (n + 1)
        psi_m1 += 1.0 / (n + m + 1)
        psi_p += 1.0 / (p + n)
        psi_q += 1.0 / (q + n)
        n += 1
        term = coef * (lw - psi_1 - psi_m1 + psi_p + psi_q)
        total += term
        abs_sum += abs(term)
        if abs(term) <= policy.rel_tol * abs(total):
            small += 1
            if small >= _CONSECUTIVE_SMALL:
                break
        else:
            small = 0
    return total, n + 1, abs(term), small >= _CONSECUTIVE_SMALL, abs_sum


def floor_parity(nu: float) -> int:
    """(-1)^[nu] with [nu] the largest integer <= nu."""
    return -1 if int(math.floor(nu)) % 2 else 1


def ggf_series(params: GgfParams, theta: AnglePoint | float,
               policy: SeriesPolicy = SeriesPolicy()) -> SeriesResult:
    """Raw hypergeometric series of a GGF-F at ``theta``.

    The right function sums in z = sin^2(theta/2); the left one uses the
    reflected argument cos^2(theta/2) and the sign (-1)^[nu].  No
    acceleration is attempted, so large degrees or points near the far
    endpoint come back with ``converged=False``.
    """
    th = as_angle(theta)
    a, b, c = -params.nu, params.nu + 2.0 * params.lam, params.lam + 0.5
    if params.side is Side.RIGHT:
        return gauss_2f1_truncated(a, b, c, th.z, policy)
    res = gauss_2f1_truncated(a, b, c, th.w, policy)
    sign = floor_parity(params.nu)
    return SeriesResult(sign * res.value, res.terms_used, res.tail_bound,
                        res.converged, res.abs_sum)
