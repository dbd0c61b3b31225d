"""Sweep harness: every bound and identity as a machine-checkable report.

Each check walks a parameter grid, records one row per point with
``lhs``, ``rhs`` and ``margin = rhs - lhs``, and passes when every margin
clears the per-row slack.  Inequality rows get a slack of
``rel_slack * |rhs| + abs_slack`` (floating-point noise); strict rows must
have a positive margin; identity rows use ``lhs = |error|`` and
``rhs = tol * scale``.

``oracle_eval`` is an independent high-precision summation of the defining
hypergeometric series in mpmath.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import asymptotics as asy
from . import ggf
from .errors import ConvergenceError, DomainError, GgfError
from .hypergeom import SeriesPolicy, floor_parity
from .params import AnglePoint, GgfParams, Side, as_angle
from .quadrature import (
    QuadSpec,
    gegenbauer_weighted_integrand,
    integrate_semiinfinite_expdecay,
    mehler_integral,
    rl_fractional_integral_right,
)

__all__ = [
    "SweepGrid",
    "PointRecord",
    "SweepReport",
    "REL_SLACK",
    "ABS_SLACK",
    "check_theorem_main",
    "check_corollary_B",
    "check_weighted",
    "check_lemma31",
    "check_appendixA",
    "check_identities",
    "check_prop47",
    "check_szego",
    "prop47_envelope",
    "oracle_value",
    "oracle_eval",
    "oracle_derivative",
    "CHECKS",
]

REL_SLACK = 1e-9
ABS_SLACK = 1e-12
DEFAULT_POLICY = ggf.DEFAULT_POLICY

FIGURE1_LAMBDAS = (0.7, 1.6, 2.3, 3.1)
FIGURE1_NU = 20.3


# ---------------------------------------------------------------- grids

def interior_thetas(n: int, probes: bool = True) -> list[float]:
    """n uniform interior angles k pi/(n+1), optionally with the two near-endpoint probes."""
    thetas = [k * math.pi / (n + 1) for k in range(1, n + 1)]
    if probes:
        thetas = [1e-4] + thetas + [math.pi - 1e-4]
    return thetas


@dataclass(frozen=True)
class SweepGrid:
    lambdas: tuple[float, ...]
    nus: tuple[float, ...]
    thetas: tuple[float, ...]
    ts: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("lambdas", "nus", "thetas"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise DomainError(f"sweep grid needs at least one value in {name}")
            object.__setattr__(self, name, values)
        if any(not 0.0 <= th <= math.pi for th in self.thetas):
            raise DomainError("grid angles must lie in [0, pi]")
        if self.ts is not None:
            ts = tuple(float(t) for t in self.ts)
            if not ts or any(t <= 0 for t in ts):
                raise DomainError("kernel grid needs positive t values")
            object.__setattr__(self, "ts", ts)

    @classmethod
    def uniform(cls, lambdas: Iterable[float], nus: Iterable[float], n_theta: int = 1001,
                probes: bool = True, ts: Iterable[float] | None = None) -> "SweepGrid":
        return cls(tuple(lambdas), tuple(nus), tuple(interior_thetas(n_theta, probes)),
                   None if ts is None else tuple(ts))

    @classmethod
    def kernel(cls, lambdas: Iterable[float] = (0.5, 1.0, 2.0, 3.1)) -> "SweepGrid":
        thetas = tuple(np.linspace(0.2, math.pi - 0.2, 15))
        return cls(tuple(lambdas), (1.0,), thetas, (0.01, 0.1, 0.5, 1.0, 2.0, 5.0))


# -------------------------------------------------------------- reports

@dataclass(frozen=True)
class PointRecord:
    lam: float
    nu: float
    theta: float
    t: float
    lhs: float
    rhs: float
    margin: float
    slack: float
    strict: bool = False
    label: str = ""

    @property
    def ok(self) -> bool:
        if not math.isfinite(self.margin):
            return False
        if self.strict:
            return self.margin > 0.0
        return self.margin >= -self.slack


@dataclass
class SweepReport:
    check_name: str
    points_tested: int
    worst_margin: float
    worst_location: tuple[float, ...]
    passed: bool
    details_path: str | None = None
    seed: int | None = None
    failures: int = 0
    skipped: list[str] = field(default_factory=list)
    rows: list[PointRecord] = field(default_factory=list, repr=False)
    children: list["SweepReport"] = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "check_name": self.check_name,
            "points_tested": self.points_tested,
            "worst_margin": self.worst_margin,
            "worst_location": list(self.worst_location),
            "passed": self.passed,
            "details_path": self.details_path,
            "seed": self.seed,
            "failures": self.failures,
            "skipped": list(self.skipped),
            "children": [c.summary() for c in self.children],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True, allow_nan=True)

    def write_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n", encoding="utf-8", newline="\n")
        return path

    def write_csv(self, path: str | Path) -> Path:
        """One row per grid point (children included), fixed 17-digit formatting."""
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["lambda", "nu", "theta", "t", "lhs", "rhs", "margin"])
            for row in self.all_rows():
                writer.writerow([_fmt(row.lam), _fmt(row.nu), _fmt(row.theta), _fmt(row.t),
                                 _fmt(row.lhs), _fmt(row.rhs), _fmt(row.margin)])
        self.details_path = str(path)
        return path

    def all_rows(self) -> list[PointRecord]:
        rows = list(self.rows)
        for child in self.children:
            rows.extend(child.all_rows())
        return rows


def _fmt(v: float) -> str:
    return "%.17g" % v


class _Collector:
    def __init__(self, name: str, rel_slack: float = REL_SLACK, abs_slack: float = ABS_SLACK):
        self.name = name
        self.rel_slack = rel_slack
        self.abs_slack = abs_slack
        self.rows: list[PointRecord] = []
        self.skipped: list[str] = []

    def bound(self, lam, nu, theta, lhs, rhs, t=math.nan, strict=False, label=""):
        slack = 0.0 if strict else self.rel_slack * abs(rhs) + self.abs_slack
        self.rows.append(PointRecord(lam, nu, theta, t, lhs, rhs, rhs - lhs, slack, strict, label))

    def identity(self, lam, nu, theta, error, tol, scale, t=math.nan, label=""):
        rhs = tol * scale
        lhs = abs(error)
        self.rows.append(PointRecord(lam, nu, theta, t, lhs, rhs, rhs - lhs, 0.0, False, label))

    def failure(self, lam, nu, theta, t=math.nan, label=""):
        self.rows.append(PointRecord(lam, nu, theta, t, math.nan, math.nan, math.nan, 0.0, False, label))

    def report(self, seed=None, children=()) -> SweepReport:
        rows = self.rows
        children = list(children)
        every = rows + [r for c in children for r in c.all_rows()]
        bad = [r for r in every if not r.ok]
        if every:
            def key(r):
                return -math.inf if not math.isfinite(r.margin) else r.margin + r.slack
            worst = min(every, key=key)
            worst_margin = worst.margin
            loc = (worst.lam, worst.nu, worst.theta) + (() if math.isnan(worst.t) else (worst.t,))
        else:
            worst_margin, loc = math.inf, ()
        passed = not bad and all(c.passed for c in children) and bool(every)
        return SweepReport(self.name, len(every), worst_margin, loc, passed, None, seed,
                           len(bad), self.skipped, rows, children)


def _random_points(grid: SweepGrid, count: int, seed: int, lo: float, hi: float):
    rng = np.random.default_rng(seed)
    lam = rng.choice(np.array(grid.lambdas), size=count)
    nu = rng.choice(np.array(grid.nus), size=count)
    th = rng.uniform(lo, hi, size=count)
    return list(zip(lam.tolist(), nu.tolist(), th.tolist()))


def _valid_case(lam, nu, col: _Collector):
    try:
        return asy.case_of(lam, nu)
    except DomainError as exc:
        col.skipped.append(f"lambda={lam}, nu={nu}: {exc}")
        return None


# ------------------------------------------------------- bound checks

def check_theorem_main(grid: SweepGrid, policy: SeriesPolicy = DEFAULT_POLICY,
                       random_points: int = 0, seed: int = 0,
                       rel_slack: float = REL_SLACK) -> SweepReport:
    """|R| <= S at every interior grid angle for parameters meeting a case condition."""
    col = _Collector("theorem_main", rel_slack)
    points = [(lam, nu, th) for lam in grid.lambdas for nu in grid.nus for th in grid.thetas
              if 0.0 < th < math.pi]
    if random_points:
        points += _random_points(grid, random_points, seed, 1e-6, math.pi - 1e-6)
    checked = {}
    for lam, nu, th in points:
        if (lam, nu) not in checked:
            checked[lam, nu] = _valid_case(lam, nu, col)
        if checked[lam, nu] is None:
            continue
        try:
            r = asy.residual_direct(lam, nu, th, policy)
        except GgfError:
            col.failure(lam, nu, th)
            continue
        s, _ = asy.bound_S(lam, nu, th)
        col.bound(lam, nu, th, abs(r), s)
    return col.report(seed if random_points else None)


def check_corollary_B(grid: SweepGrid, c: float = 1.0, policy: SeriesPolicy = DEFAULT_POLICY,
                      random_points: int = 0, seed: int = 0,
                      rel_slack: float = REL_SLACK) -> SweepReport:
    """|R| nu^(lam+1) sin(theta) <= B on the interval where B is claimed."""
    col = _Collector("corollary_B", rel_slack)
    points = [(lam, nu, th) for lam in grid.lambdas for nu in grid.nus for th in grid.thetas]
    if random_points:
        points += _random_points(grid, random_points, seed, 1e-6, math.pi - 1e-6)
    constants = {}
    for lam, nu, th in points:
        if (lam, nu) not in constants:
            constants[lam, nu] = asy.bound_B(lam, nu, c) if _valid_case(lam, nu, col) else None
        if constants[lam, nu] is None:
            continue
        b, (lo, hi) = constants[lam, nu]
        if not (lo <= th <= hi and 0.0 < th < math.pi):
            continue
        try:
            r = asy.residual_direct(lam, nu, th, policy)
        except GgfError:
            col.failure(lam, nu, th)
            continue
        col.bound(lam, nu, th, abs(r) * nu ** (lam + 1.0) * math.sin(th), b)
    return col.report(seed if random_points else None)


def check_weighted(grid: SweepGrid, policy: SeriesPolicy = DEFAULT_POLICY,
                   random_points: int = 0, seed: int = 0,
                   rel_slack: float = REL_SLACK) -> SweepReport:
    """|R~| <= S~ on [0, pi]; the two endpoints are always included via their limits."""
    col = _Collector("weighted", rel_slack)
    thetas = sorted(set(grid.thetas) | {0.0, math.pi})
    points = [(lam, nu, th) for lam in grid.lambdas for nu in grid.nus for th in thetas]
    if random_points:
        points += _random_points(grid, random_points, seed, 0.0, math.pi)
    valid = {}
    for lam, nu, th in points:
        if (lam, nu) not in valid:
            valid[lam, nu] = _valid_case(lam, nu, col) is not None
        if not valid[lam, nu]:
            continue
        try:
            d = asy.weighted_pair(lam, nu, th, policy)
        except GgfError:
            col.failure(lam, nu, th)
            continue
        col.bound(lam, nu, th, abs(d.weighted_residual), d.weighted_bound)
    return col.report(seed if random_points else None)


def _kernel_points(grid: SweepGrid, random_points: int, seed: int):
    ts = grid.ts or (0.01, 0.1, 0.5, 1.0, 2.0, 5.0)
    pts = [(lam, th, t) for lam in grid.lambdas for th in grid.thetas for t in ts
           if 0.0 < th < math.pi]
    if random_points:
        rng = np.random.default_rng(seed)
        lam = rng.choice(np.array(grid.lambdas), size=random_points)
        th = rng.uniform(0.05, math.pi - 0.05, size=random_points)
        t = 10.0 ** rng.uniform(-2.0, math.log10(5.0), size=random_points)
        pts += list(zip(lam.tolist(), th.tolist(), t.tolist()))
    return pts


def check_lemma31(grid: SweepGrid, random_points: int = 0, seed: int = 0,
                  rel_slack: float = REL_SLACK) -> SweepReport:
    """|f(lam, theta, t)| <= closed-form majorant; strict wherever the majorant is nonzero."""
    col = _Collector("lemma31", rel_slack)
    for lam, th, t in _kernel_points(grid, random_points, seed):
        f = abs(asy.kernel_f(lam, th, t))
        bound = asy.f_bound(lam, th, t)
        col.bound(lam, math.nan, th, f, bound, t=t, strict=bound > 0.0)
    return col.report(seed if random_points else None)


def g_modulus_sandwich(theta: float, t: float) -> tuple[float, float, float]:
    """(lower, |g|^2, upper) of the two-sided hyperbolic estimate."""
    th = as_angle(theta)
    c2, s2 = th.x**2, th.sin_theta**2
    g = asy.kernel_g(th, t)
    mod2 = g.real**2 + g.imag**2
    ch_half, ch = math.cosh(0.5 * t), math.cosh(t)
    lower = 0.25 * t * t * c2 * ch_half ** (4.0 / 3.0) + s2 * ch ** (2.0 / 3.0)
    upper = 0.25 * t * t * c2 * ch_half**4 + s2 * ch**2
    return lower, mod2, upper


def dg_bound(theta: float, t: float) -> float:
    th = as_angle(theta)
    return (t * th.sin_theta / 3.0 + 0.5 * abs(th.x)) * math.cosh(t)


def check_appendixA(grid: SweepGrid, random_points: int = 0, seed: int = 0) -> SweepReport:
    """Strict two-sided |g|^2 estimate and the bound on |dg/dt|."""
    col = _Collector("appendixA")
    seen = set()
    for _, th, t in _kernel_points(grid, random_points, seed):
        if (th, t) in seen:
            continue
        seen.add((th, t))
        lower, mod2, upper = g_modulus_sandwich(th, t)
        col.bound(math.nan, math.nan, th, lower, mod2, t=t, strict=True, label="A1_lower")
        col.bound(math.nan, math.nan, th, mod2, upper, t=t, strict=True, label="A1_upper")
        col.bound(math.nan, math.nan, th, abs(asy.kernel_dg(th, t)), dg_bound(th, t), t=t,
                  strict=True, label="A2")
    return col.report(seed if random_points else None)


def prop47_envelope(lam: float, nu: float) -> float:
    """rho (0 < lam < 1) or kappa (lam >= 1) bounding the weighted maximum of |G|."""
    if not lam > 0:
        raise DomainError(f"envelope needs lambda > 0, got {lam}")
    if not nu >= 0:
        raise DomainError(f"envelope needs nu >= 0, got {nu}")
    c2 = math.cos(0.5 * math.pi * nu) ** 2
    s2 = math.sin(0.5 * math.pi * nu) ** 2
    lg = math.lgamma
    if lam < 1.0:
        first = c2 * math.exp(2.0 * (lg(0.5 * nu + 0.5) - lg(0.5 * (nu + 1.0) + lam)))
        denom = nu * nu + 2.0 * lam * nu + lam
    else:
        first = c2 * math.exp(2.0 * (lg(0.5 * (nu + 1.0)) - lg(0.5 * (nu + 1.0) + lam)))
        denom = 2.0 * lam - 1.0 + nu * (nu + 2.0 * lam)
    second = 4.0 * s2 / denom * math.exp(2.0 * (lg(0.5 * nu + 1.0) - lg(0.5 * nu + lam)))
    return math.exp(lg(lam + 0.5)) / math.sqrt(math.pi) * math.sqrt(first + second)


def _prop47_weighted(lam: float, nu: float, x: float, policy) -> float:
    if x >= 1.0:
        return 0.0
    exponent = 0.5 * lam if lam < 1.0 else lam - 0.5
    if x <= -1.0:
        # Below lam = 1 the weight beats any divergence; from lam = 1 on the
        # weighted value tends to 2^(2 lam - 1) Q (zero for integer nu).
        if lam < 1.0:
            return 0.0
        behavior = ggf.endpoint_minus_one(lam, nu)
        if behavior.kind is ggf.EndpointKind.FINITE_VALUE:
            return 0.0
        return abs(2.0 ** (2.0 * lam - 1.0) * behavior.value)
    th = AnglePoint.from_x(x)
    return (th.sin_theta**2) ** exponent * abs(ggf.evaluate(GgfParams(lam, nu), th, policy))


def check_prop47(grid: SweepGrid, policy: SeriesPolicy = DEFAULT_POLICY, n_x: int = 2001,
                 random_points: int = 0, seed: int = 0, rel_slack: float = REL_SLACK) -> SweepReport:
    """Weighted |G| against rho / kappa on a uniform x-grid of [-1, 1] (endpoints by limits)."""
    col = _Collector("prop47", rel_slack)
    xs = np.linspace(-1.0, 1.0, n_x).tolist()
    rng = np.random.default_rng(seed) if random_points else None
    for lam in grid.lambdas:
        for nu in grid.nus:
            try:
                env = prop47_envelope(lam, nu)
            except DomainError as exc:
                col.skipped.append(f"lambda={lam}, nu={nu}: {exc}")
                continue
            for x in xs:
                col.bound(lam, nu, math.acos(x), _prop47_weighted(lam, nu, x, policy), env)
    if rng is not None:
        for lam, nu, x in zip(rng.choice(np.array(grid.lambdas), random_points).tolist(),
                              rng.choice(np.array(grid.nus), random_points).tolist(),
                              rng.uniform(-1.0, 1.0, random_points).tolist()):
            if lam > 0:
                col.bound(lam, nu, math.acos(x), _prop47_weighted(lam, nu, x, policy),
                          prop47_envelope(lam, nu))
    return col.report(seed if random_points else None)


def szego_scaled_error(n: int, lam: float, n_theta: int = 2001) -> float:
    """max over [5/n, pi - 5/n] of |exact - leading| * n sin(theta) * sqrt(pi n) / 2^lam."""
    thetas = np.linspace(5.0 / n, math.pi - 5.0 / n, n_theta)
    worst = 0.0
    scale = math.sqrt(math.pi * n) / 2.0**lam
    for th in thetas.tolist():
        diff = asy.jacobi_weighted(n, lam, th) - asy.szego_leading(n, lam, th)
        worst = max(worst, abs(diff) * n * math.sin(th) * scale)
    return worst


def check_szego(ns: Sequence[int] = (100, 200, 400), lam: float = 0.8, growth: float = 1.5,
                n_theta: int = 2001) -> SweepReport:
    """The O(1) remainder stays bounded: each scaled error at most ``growth`` times the previous."""
    col = _Collector("szego")
    values = [szego_scaled_error(n, lam, n_theta) for n in ns]
    for (n0, v0), (n1, v1) in zip(zip(ns, values), zip(ns[1:], values[1:])):
        col.bound(lam, float(n1), math.nan, v1, growth * v0, label=f"n={n0}->{n1}")
    return col.report()


# ------------------------------------------------------------- oracle

def _oracle_series(lam, nu, z, dps, derivative_order=0, term_cap=200000):
    """Sum of the defining series, differentiated k times in x term by term, with a tail bound.

    Term j of the k-th derivative is c_j (-1/2)^k j!/(j-k)! z^(j-k), where
    c_j = (a)_j (b)_j / ((c)_j j!); consecutive terms differ by the factor
    (a+j)(b+j) z / ((c+j)(j+1-k)).
    """
    with mpmath.workdps(dps):
        a, b = -mpmath.mpf(nu), mpmath.mpf(nu) + 2 * mpmath.mpf(lam)
        c = mpmath.mpf(lam) + mpmath.mpf(1) / 2
        z = mpmath.mpf(z)
        k = derivative_order
        term = mpmath.rf(a, k) * mpmath.rf(b, k) / mpmath.rf(c, k) * (mpmath.mpf(-1) / 2) ** k
        total = mpmath.mpf(0)
        peak = mpmath.mpf(0)
        eps = mpmath.mpf(10) ** (-dps)
        settle = 2 * (abs(a) + abs(b) + abs(c) + k) + 2
        j = k
        while j < term_cap + k:
            total += term
            peak = max(peak, abs(term))
            ratio = (a + j) * (b + j) * z / ((c + j) * (j + 1 - k))
            term *= ratio
            j += 1
            if term == 0:
                return total, mpmath.mpf(0), peak
            if j > settle and abs(term) <= eps * abs(total):
                # Past ``settle`` the ratio moves monotonically toward z.
                r = max(abs(ratio), z)
                if r < 1:
                    return total, abs(term) / (1 - r), peak
        raise ConvergenceError(f"oracle series did not reach its tail bound within {term_cap} terms")


def _oracle_z(params: GgfParams, theta) -> tuple[float, float]:
    th = as_angle(theta)
    if params.side is Side.LEFT:
        return th.w, floor_parity(params.nu)
    return th.z, 1.0


def oracle_value(params: GgfParams, theta, digits: int = 50, derivative_order: int = 0):
    """mpmath value of G (or its k-th x-derivative) with at least digits - 5 correct digits."""
    if digits < 30:
        raise DomainError("oracle needs at least 30 digits")
    z, sign = _oracle_z(params, theta)
    if z >= 1.0:
        raise ConvergenceError("oracle series does not converge at this point")
    dps = digits + 10
    total, tail, peak = _oracle_series(params.lam, params.nu, z, dps, derivative_order)
    lost = 0 if total == 0 else max(0, int(mpmath.log10(peak / abs(total))) + 1)
    if lost > 5:
        total, tail, peak = _oracle_series(params.lam, params.nu, z, dps + lost, derivative_order)
    if params.side is Side.LEFT and derivative_order % 2:
        sign = -sign
    return sign * total


def oracle_eval(params: GgfParams, theta, digits: int = 50) -> str:
    """Decimal string of G(cos theta) from the high-precision series."""
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(oracle_value(params, theta, digits), digits)


def oracle_derivative(params: GgfParams, theta, k: int, digits: int = 50) -> float:
    return float(oracle_value(params, theta, digits, derivative_order=k))


# ---------------------------------------------------------- identities

IDENTITY_NAMES = ("gamma_calibration", "mehler", "fci", "fci_shifted", "residual_integral",
                  "nu_recurrence", "lambda_recurrence", "ode", "series_p43", "derivative",
                  "oracle_agreement")

_ALGEBRAIC_GRID = SweepGrid((0.7, 1.6, 2.3, 3.1), (2.5, 7.3, 20.3),
                            tuple(interior_thetas(101, probes=False)))


def _identity_gamma(col, tol):
    for z in (0.3, 1.0, 2.6):
        for a in (1.0, 5.0, 21.0):
            res = integrate_semiinfinite_expdecay(lambda t, z=z, a=a: t**z * np.exp(-a * t), a, z)
            exact = math.exp(math.lgamma(z + 1.0) - (z + 1.0) * math.log(a))
            col.identity(z, a, math.nan, res.value - exact, tol or 1e-10, exact)


def _identity_mehler(col, tol, spec):
    for lam in (0.6, 1.5, 3.0):
        for nu in (3.7, 12.4):
            for phi in (0.3, math.pi / 2, 2.8):
                res = mehler_integral(lam, nu, phi, spec)
                direct = math.sin(phi) ** (2 * lam - 1) * ggf.evaluate(GgfParams(lam, nu), phi)
                col.identity(lam, nu, phi, res.value - direct, tol or 1e-6, abs(direct))


def fci_rhs(lam: float, nu: float, s: float, x: float) -> tuple[float, float]:
    """Right-hand side of the fractional-integral formula and its natural scale."""
    pref = math.exp(math.lgamma(lam + 0.5) - s * math.log(2.0) - math.lgamma(lam + s + 0.5)) \
        * (1.0 - x * x) ** (lam + s - 0.5)
    g = ggf.evaluate(GgfParams(lam + s, nu - s), AnglePoint.from_x(x))
    return pref * g, pref


def _identity_fci(col, tol, spec, shifted=False):
    for s in (0.3, 0.5, 1.2):
        for lam0 in (0.4, 1.1):
            for nu0 in (2.5, 7.3):
                lam, nu = (lam0 - s, nu0 + s) if shifted else (lam0, nu0)
                if not lam > -0.5 or nu < s:
                    col.skipped.append(f"s={s}, lambda={lam:.3g}, nu={nu:.3g}: outside the formula's range")
                    continue
                for x in (-0.5, 0.0, 0.6):
                    res = rl_fractional_integral_right(gegenbauer_weighted_integrand(lam, nu), s, x, spec)
                    rhs, scale = fci_rhs(lam, nu, s, x)
                    col.identity(lam, nu, math.acos(x), res.value - rhs, tol or 1e-6,
                                 max(abs(rhs), scale), t=s)


def _identity_residual(col, tol, spec, policy):
    for lam in FIGURE1_LAMBDAS:
        for nu in (5.5, 20.3):
            for th in (0.3, 1.0, math.pi / 2, 2.5):
                d = asy.residual_direct(lam, nu, th, policy)
                q = asy.residual_integral(lam, nu, th, spec)
                col.identity(lam, nu, th, d - q.value, 1.0, max((tol or 1e-6) * abs(d), 1e-10))


def _recurrence_grid(grid):
    return grid if grid is not None else _ALGEBRAIC_GRID


def _identity_nu_step(col, tol, grid, policy):
    for lam in grid.lambdas:
        for nu in grid.nus:
            if nu < 1:
                continue
            p = lambda n: GgfParams(lam, n)
            for th in grid.thetas:
                if not 0 < th < math.pi:
                    continue
                x = math.cos(th)
                g0, g1 = ggf.evaluate(p(nu - 1), th, policy), ggf.evaluate(p(nu), th, policy)
                g2 = ggf.evaluate(p(nu + 1), th, policy)
                pred = ggf.recurrence_nu_step(lam, nu, x, g1, g0)
                scale = max(abs(2 * (nu + lam) * x * g1), abs(nu * g0), abs((nu + 2 * lam) * g2)) / (nu + 2 * lam)
                col.identity(lam, nu, th, pred - g2, tol or 1e-11, max(scale, abs(g2)))


def _identity_lambda_mix(col, tol, grid, policy):
    for lam in grid.lambdas:
        for nu in grid.nus:
            if nu < 2:
                continue
            for th in grid.thetas:
                if not 0 < th < math.pi:
                    continue
                lhs, t1, t2 = ggf.recurrence_lambda_mix_terms(lam, nu, th, policy)
                col.identity(lam, nu, th, lhs - (t1 - t2), tol or 1e-11, max(abs(lhs), abs(t1), abs(t2)))


def _identity_ode(col, tol, grid, policy):
    for lam in grid.lambdas:
        for nu in grid.nus:
            if nu < 2:
                continue
            for th in grid.thetas:
                if not 0 < th < math.pi:
                    continue
                col.identity(lam, nu, th, ggf.sturm_liouville_residual(GgfParams(lam, nu), th, policy),
                             tol or 1e-8, 1.0)


def _identity_p43(col, tol, grid, policy):
    thetas = [th for th in (grid.thetas if grid is not _ALGEBRAIC_GRID else
                            [0.45 * math.pi * k / 101 for k in range(1, 102)]) if 0 < th < 0.45 * math.pi]
    for lam in grid.lambdas:
        for nu in grid.nus:
            for th in thetas:
                params = GgfParams(lam, nu)
                res = ggf.series_representation_p43(params, th)
                g = ggf.evaluate(params, th, policy)
                if not res.converged:
                    col.failure(lam, nu, th)
                    continue
                col.identity(lam, nu, th, res.value - g, tol or 1e-10, max(abs(g), _local_scale(lam, nu, th)))


def _local_scale(lam: float, nu: float, th: float) -> float:
    """Size of the oscillation envelope of G near theta, used to judge errors near zeros."""
    return min(1.0, asy.leading_amplitude(lam, nu) / math.sin(th) ** lam)


def _identity_derivative(col, tol, policy):
    thetas = np.linspace(0.15, 2.5, 15).tolist()
    for lam in FIGURE1_LAMBDAS:
        for nu in (2.5, 7.3, 20.3):
            for k in (1, 2):
                params = GgfParams(lam, nu)
                coef = abs(ggf.derivative_coefficient(lam, nu, k))
                for th in thetas:
                    d = ggf.derivative(params, th, k, policy)
                    o = oracle_derivative(params, th, k)
                    scale = max(abs(o), coef * _local_scale(lam + k, nu - k, th))
                    col.identity(lam, nu, th, d - o, tol or 1e-9, scale, t=float(k))


def _identity_oracle(col, tol, policy, count=50, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        lam = float(rng.choice([0.2, 0.7, 1.6, 2.3, 3.1]))
        nu = float(rng.uniform(0.0, 25.0))
        th = float(rng.uniform(0.0, 0.8 * math.pi))
        params = GgfParams(lam, nu)
        o = float(oracle_value(params, th))
        col.identity(lam, nu, th, ggf.evaluate(params, th, policy) - o, tol or 1e-12,
                     max(abs(o), _local_scale(lam, nu, max(th, 1e-3))))


def check_identities(grid: SweepGrid | None = None, quad_spec: QuadSpec = QuadSpec(),
                     policy: SeriesPolicy = DEFAULT_POLICY, tolerance: float | None = None,
                     only: Iterable[str] | None = None) -> SweepReport:
    """Integral representations, recurrences, ODE, series form, derivatives and oracle agreement.

    ``grid`` replaces the default (lambda, nu, theta) grid of the algebraic
    identities; ``tolerance`` replaces every identity's own tolerance.
    """
    names = tuple(only) if only is not None else IDENTITY_NAMES
    unknown = set(names) - set(IDENTITY_NAMES)
    if unknown:
        raise DomainError(f"unknown identity checks: {sorted(unknown)}")
    agrid = _recurrence_grid(grid)
    runners = {
        "gamma_calibration": lambda c: _identity_gamma(c, tolerance),
        "mehler": lambda c: _identity_mehler(c, tolerance, quad_spec),
        "fci": lambda c: _identity_fci(c, tolerance, quad_spec),
        "fci_shifted": lambda c: _identity_fci(c, tolerance, quad_spec, shifted=True),
        "residual_integral": lambda c: _identity_residual(c, tolerance, quad_spec, policy),
        "nu_recurrence": lambda c: _identity_nu_step(c, tolerance, agrid, policy),
        "lambda_recurrence": lambda c: _identity_lambda_mix(c, tolerance, agrid, policy),
        "ode": lambda c: _identity_ode(c, tolerance, agrid, policy),
        "series_p43": lambda c: _identity_p43(c, tolerance, agrid, policy),
        "derivative": lambda c: _identity_derivative(c, tolerance, policy),
        "oracle_agreement": lambda c: _identity_oracle(c, tolerance, policy),
    }
    children = []
    for name in names:
        col = _Collector(name)
        try:
            runners[name](col)
        except GgfError as exc:
            col.skipped.append(f"aborted: {exc}")
            col.failure(math.nan, math.nan, math.nan, label=name)
        children.append(col.report())
    return _Collector("identities").report(children=children)


CHECKS = ("theorem_main", "corollary_B", "weighted", "lemma31", "appendixA",
          "identities", "prop47", "szego")
