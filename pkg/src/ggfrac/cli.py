"""Command-line front end: point evaluation, tables, verification suite and the figure1 panels.

Exit codes: 0 pass, 2 usage or domain error, 3 numerical non-convergence,
4 bound violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import asymptotics as asy
from . import ggf, verify
from .errors import ConvergenceError, DivergenceError, DomainError, GgfError
from .hypergeom import SeriesPolicy
from .params import GgfParams, Side
from .quadrature import QuadSpec
from .svgplot import Series, line_plot

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_VIOLATION = 0, 2, 3, 4
OUTPUT_DIR_ENV = "GGFRAC_OUTPUT_DIR"

FIGURE1_LAMBDAS = (0.7, 1.6, 2.3, 3.1)
FIGURE1_NU = 20.3

# Default verification grids.
CASE_I_LAMBDAS, CASE_I_NUS = (0.1, 0.5, 1.0, 1.5, 2.0), (1.5, 5.5, 20.3, 50.1)
CASE_II_LAMBDAS, CASE_II_NUS = (2.3, 3.1, 4.5), (5.5, 20.3, 50.1)
KERNEL_LAMBDAS = (0.5, 1.0, 2.0, 3.1)
PROP47_LAMBDAS, PROP47_NUS = (0.3, 0.7, 1.0, 2.5), (0.5, 3.7, 20.3)
SZEGO_NS, SZEGO_LAMBDA = (100, 200, 400), 0.8

CLAIMS = {
    "theorem_main": "|R| <= S on (0, pi)",
    "corollary_B": "|R| nu^(lam+1) sin(theta) <= B",
    "weighted": "|R~| <= S~ on [0, pi]",
    "lemma31": "kernel |f| majorant",
    "appendixA": "|g|^2 sandwich and |dg/dt| bound",
    "identities": "integral, recurrence, ODE, series, derivative identities",
    "prop47": "weighted max |G| <= rho / kappa",
    "szego": "Jacobi-normalized remainder stays O(1)",
}


@dataclass
class RunConfig:
    """Resolved options of one invocation."""

    command: str
    lam: float | None = None
    nu: float | None = None
    theta: float | None = None
    side: Side = Side.RIGHT
    lambdas: tuple[float, ...] = FIGURE1_LAMBDAS
    grid: int | None = None
    output_format: str = "text"
    output_path: Path | None = None
    output_dir: Path | None = None
    tolerance: float | None = None
    only: tuple[str, ...] = ()
    seed: int = 0
    random_points: int = 1000
    log_y: bool = False
    policy: SeriesPolicy = field(default_factory=SeriesPolicy)
    quad: QuadSpec = field(default_factory=QuadSpec)

    def __post_init__(self):
        if self.output_format == "svg" and self.command not in ("table", "figure1"):
            raise DomainError("svg output is only available for table and figure1")
        if self.grid is not None and self.grid < 2:
            raise DomainError(f"--grid needs at least 2 points, got {self.grid}")


# ------------------------------------------------------------- parsing

def parse_theta_frac(text: str) -> float:
    """'1/3' -> pi/3; plain decimals are accepted as well."""
    try:
        return float(Fraction(text.strip())) * math.pi
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction of pi: {text!r}") from exc


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def read_config_file(path: str | Path) -> dict[str, str]:
    """key=value lines (UTF-8); '#' starts a comment, dashes and underscores are interchangeable."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value file overriding the built-in defaults")
    p.add_argument("--output-dir", help=f"directory for written files (default: ${OUTPUT_DIR_ENV} or .)")
    p.add_argument("--format", dest="output_format", choices=("text", "csv", "json", "svg"), default="text")
    p.add_argument("--output", dest="output_path", help="write the result to this file instead of stdout")
    p.add_argument("--max-terms", type=int, default=SeriesPolicy().max_terms, help="series term cap")
    p.add_argument("--quad-abs-tol", type=float, default=QuadSpec().abs_tol)
    p.add_argument("--quad-rel-tol", type=float, default=QuadSpec().rel_tol)


def _add_point(p: argparse.ArgumentParser, need_theta: bool):
    p.add_argument("--lambda", dest="lam", type=float, help="parameter lambda > -1/2")
    p.add_argument("--nu", type=float, help="degree nu >= 0")
    p.add_argument("--side", choices=[s.value for s in Side], default=Side.RIGHT.value)
    if need_theta:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--theta", type=float, help="angle in [0, pi]")
        g.add_argument("--theta-frac", type=parse_theta_frac, help="angle as a fraction of pi, e.g. 1/3")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="ggfrac", description="Generalized Gegenbauer functions of fractional degree.")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("eval", help="value, leading term, residual and bounds at one point")
    _add_point(p, need_theta=True)
    _add_common(p)
    subs["eval"] = p

    p = sub.add_parser("table", help="decomposition on a uniform theta grid of [0, pi]")
    _add_point(p, need_theta=False)
    p.add_argument("--grid", type=int, default=201, help="number of theta points")
    p.add_argument("--log-y", action="store_true", help="log-scale y axis for svg output")
    _add_common(p)
    subs["table"] = p

    p = sub.add_parser("check", help="run every verification suite")
    p.add_argument("--only", action="append", default=[], help="restrict to these checks (repeatable)")
    p.add_argument("--tolerance", type=float, help="override every identity tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed of the random-point supplement")
    p.add_argument("--random-points", type=int, default=1000, help="random points per check (0 disables)")
    _add_common(p)
    subs["check"] = p

    p = sub.add_parser("identities", help="run the identity suite only")
    p.add_argument("--only", action="append", default=[], help="restrict to these identities (repeatable)")
    p.add_argument("--tolerance", type=float, help="override every identity tolerance")
    _add_common(p)
    subs["identities"] = p

    p = sub.add_parser("figure1", help="|R~| against S~ over [0, pi], one CSV and SVG per lambda")
    p.add_argument("--nu", type=float, default=FIGURE1_NU)
    p.add_argument("--lambdas", type=parse_float_list, default=FIGURE1_LAMBDAS)
    p.add_argument("--grid", type=int, default=2001, help="number of theta points")
    p.add_argument("--log-y", action="store_true", help="log-scale y axis")
    _add_common(p)
    subs["figure1"] = p
    return parser, subs


def _apply_config(sub: argparse.ArgumentParser, values: dict[str, str]):
    actions = {a.dest: a for a in sub._actions}
    for key, raw in values.items():
        if key == "config":
            continue
        action = actions.get(key) or actions.get({"lambda": "lam", "format": "output_format",
                                                  "output": "output_path"}.get(key, ""))
        if action is None:
            raise DomainError(f"unknown config key {key!r} for this command")
        if action.nargs == 0:
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            value = [v.strip() for v in raw.split(",") if v.strip()]
        else:
            value = action.type(raw) if action.type else raw
            if action.choices and value not in action.choices:
                raise DomainError(f"config {key}={raw!r} is not one of {list(action.choices)}")
        action.default = value


def _split_only(items: Sequence[str]) -> tuple[str, ...]:
    return tuple(v.strip() for item in items for v in item.split(",") if v.strip())


def resolve(argv: Sequence[str] | None) -> RunConfig:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        _apply_config(subs[args.command], read_config_file(args.config))
        args = parser.parse_args(argv)
    theta = getattr(args, "theta", None)
    if getattr(args, "theta_frac", None) is not None:
        theta = args.theta_frac
    out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV)
    return RunConfig(
        command=args.command,
        lam=getattr(args, "lam", None),
        nu=getattr(args, "nu", None),
        theta=theta,
        side=Side(getattr(args, "side", Side.RIGHT.value)),
        lambdas=tuple(getattr(args, "lambdas", FIGURE1_LAMBDAS)),
        grid=getattr(args, "grid", None),
        output_format=args.output_format,
        output_path=Path(args.output_path) if args.output_path else None,
        output_dir=Path(out_dir) if out_dir else None,
        tolerance=getattr(args, "tolerance", None),
        only=_split_only(getattr(args, "only", ())),
        seed=getattr(args, "seed", 0),
        random_points=getattr(args, "random_points", 0),
        log_y=getattr(args, "log_y", False),
        policy=SeriesPolicy(max_terms=args.max_terms),
        quad=QuadSpec(abs_tol=args.quad_abs_tol, rel_tol=args.quad_rel_tol),
    )


# ------------------------------------------------------------- output

def fmt(v: float) -> str:
    return "%.17g" % v


def csv_text(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str, out=None):
    if cfg.output_path is not None:
        path = cfg.output_path
        if cfg.output_dir is not None and not path.is_absolute():
            path = cfg.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    else:
        (out or sys.stdout).write(text)


def _require_point(cfg: RunConfig, need_theta: bool):
    missing = [name for name, v in (("--lambda", cfg.lam), ("--nu", cfg.nu)) if v is None]
    if need_theta and cfg.theta is None:
        missing.append("--theta or --theta-frac")
    if missing:
        raise DomainError("missing " + ", ".join(missing))


# ------------------------------------------------------------- commands

def _decomposition(lam, nu, theta, policy) -> dict:
    """Asymptotic pieces when the bounds apply, otherwise nan with the reason."""
    try:
        d = asy.weighted_pair(lam, nu, theta, policy)
    except DomainError as exc:
        nan = math.nan
        return {"leading": nan, "residual": nan, "bound_S": nan, "weighted_residual": nan,
                "weighted_bound": nan, "case": f"n/a ({exc})"}
    return {"leading": d.leading, "residual": d.residual, "bound_S": d.bound_S,
            "weighted_residual": d.weighted_residual, "weighted_bound": d.weighted_bound,
            "case": d.case_tag.value}


def cmd_eval(cfg: RunConfig, out=None) -> int:
    _require_point(cfg, need_theta=True)
    params = GgfParams(cfg.lam, cfg.nu, cfg.side)
    value = ggf.evaluate(params, cfg.theta, cfg.policy)
    info = {"lambda": cfg.lam, "nu": cfg.nu, "theta": cfg.theta, "side": cfg.side.value, "value": value}
    if cfg.side is Side.RIGHT:
        info.update(_decomposition(cfg.lam, cfg.nu, cfg.theta, cfg.policy))
    if cfg.output_format == "json":
        text = json.dumps(info, indent=2) + "\n"
    elif cfg.output_format == "csv":
        keys = list(info)
        text = ",".join(keys) + "\n" + ",".join(
            fmt(v) if isinstance(v, float) else str(v) for v in info.values()) + "\n"
    else:
        width = max(len(k) for k in info)
        text = "".join(
            f"{k:<{width}}  {('%.16g' % v) if isinstance(v, float) else v}\n" for k, v in info.items())
    _emit(cfg, text, out)
    return EXIT_OK


TABLE_HEADER = ("theta", "value", "leading", "residual", "bound_S", "weighted_residual", "weighted_bound")


def table_rows(lam: float, nu: float, n: int, policy: SeriesPolicy) -> list[tuple[float, ...]]:
    rows = []
    for th in np.linspace(0.0, math.pi, n).tolist():
        try:
            value = ggf.evaluate(GgfParams(lam, nu), th, policy)
        except DivergenceError:
            value = math.inf
        d = _decomposition(lam, nu, th, policy)
        rows.append((th, value, d["leading"], d["residual"], d["bound_S"],
                     d["weighted_residual"], d["weighted_bound"]))
    return rows


def cmd_table(cfg: RunConfig, out=None) -> int:
    _require_point(cfg, need_theta=False)
    GgfParams(cfg.lam, cfg.nu)
    rows = table_rows(cfg.lam, cfg.nu, cfg.grid or 201, cfg.policy)
    if cfg.output_format == "json":
        text = json.dumps([dict(zip(TABLE_HEADER, r)) for r in rows], indent=1) + "\n"
    elif cfg.output_format == "svg":
        xs = [r[0] for r in rows]
        series = [Series("|R~|", xs, [abs(r[5]) for r in rows]),
                  Series("S~", xs, [r[6] for r in rows], dashed=True)]
        text = line_plot(series, f"lambda={cfg.lam:g}, nu={cfg.nu:g}", "theta", "weighted residual",
                         log_y=cfg.log_y)
    elif cfg.output_format == "csv":
        text = csv_text(TABLE_HEADER, rows)
    else:
        text = "".join(" ".join(f"{v: .9e}" for v in r) + "\n" for r in rows)
        text = " ".join(f"{h:>16s}" for h in TABLE_HEADER) + "\n" + text
    _emit(cfg, text, out)
    return EXIT_OK


def _output_dir(cfg: RunConfig, default: str | None = ".") -> Path | None:
    d = cfg.output_dir or (Path(default) if default is not None else None)
    if d is not None:
        d.mkdir(parents=True, exist_ok=True)
    return d


FIGURE1_HEADER = ("theta", "abs_weighted_residual", "weighted_bound")


def figure1_panel(lam: float, nu: float, n: int, policy: SeriesPolicy) -> list[tuple[float, float, float]]:
    rows = []
    for th in np.linspace(0.0, math.pi, n).tolist():
        d = asy.weighted_pair(lam, nu, th, policy)
        rows.append((th, abs(d.weighted_residual), d.weighted_bound))
    return rows


def figure1_violations(rows, rel_slack=verify.REL_SLACK, abs_slack=verify.ABS_SLACK) -> list[tuple]:
    return [r for r in rows if not r[1] <= r[2] * (1.0 + rel_slack) + abs_slack]


def cmd_figure1(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    n = cfg.grid or 2001
    nu = FIGURE1_NU if cfg.nu is None else cfg.nu
    directory = _output_dir(cfg)
    status = EXIT_OK
    for lam in cfg.lambdas:
        rows = figure1_panel(lam, nu, n, cfg.policy)
        stem = f"figure1_lambda_{lam:g}_nu_{nu:g}"
        (directory / f"{stem}.csv").write_text(csv_text(FIGURE1_HEADER, rows), encoding="utf-8", newline="\n")
        xs = [r[0] for r in rows]
        svg = line_plot([Series("|R~(theta)|", xs, [r[1] for r in rows]),
                         Series("S~(theta)", xs, [r[2] for r in rows], dashed=True)],
                        f"lambda = {lam:g}, nu = {nu:g}", "theta", "weighted residual and bound",
                        log_y=cfg.log_y)
        (directory / f"{stem}.svg").write_text(svg, encoding="utf-8", newline="\n")
        bad = figure1_violations(rows)
        worst = min((r[2] - r[1] for r in rows), default=math.inf)
        verdict = "PASS" if not bad else f"FAIL ({len(bad)} rows)"
        out.write(f"lambda={lam:g} nu={nu:g} rows={len(rows)} min(S~-|R~|)={worst:.3e} {verdict} -> {stem}.csv/.svg\n")
        if bad:
            status = EXIT_VIOLATION
    return status


def run_suite(names: Sequence[str], tolerance: float | None = None, seed: int = 0,
              random_points: int = 1000, policy: SeriesPolicy = SeriesPolicy(),
              quad: QuadSpec = QuadSpec()) -> list[verify.SweepReport]:
    """Run the named checks on their default grids."""
    case_i = verify.SweepGrid.uniform(CASE_I_LAMBDAS, CASE_I_NUS)
    case_ii = verify.SweepGrid.uniform(CASE_II_LAMBDAS, CASE_II_NUS)
    kernel = verify.SweepGrid.kernel(KERNEL_LAMBDAS)
    rp = random_points

    def merged(check, **kw):
        a = check(case_i, policy=policy, random_points=rp, seed=seed, **kw)
        b = check(case_ii, policy=policy, random_points=rp, seed=seed + 1, **kw)
        col = verify._Collector(a.check_name)
        child_a, child_b = a, b
        child_a.check_name, child_b.check_name = f"{a.check_name}[case_i]", f"{b.check_name}[case_ii]"
        return col.report(seed if rp else None, children=[child_a, child_b])

    runners = {
        "theorem_main": lambda: merged(verify.check_theorem_main),
        "corollary_B": lambda: merged(verify.check_corollary_B),
        "weighted": lambda: merged(verify.check_weighted),
        "lemma31": lambda: verify.check_lemma31(kernel, random_points=rp, seed=seed),
        "appendixA": lambda: verify.check_appendixA(kernel, random_points=rp, seed=seed),
        "identities": lambda: verify.check_identities(quad_spec=quad, policy=policy, tolerance=tolerance),
        "prop47": lambda: verify.check_prop47(
            verify.SweepGrid((PROP47_LAMBDAS), PROP47_NUS, (math.pi / 2,)), policy=policy,
            random_points=rp, seed=seed),
        "szego": lambda: verify.check_szego(SZEGO_NS, SZEGO_LAMBDA),
    }
    unknown = [n for n in names if n not in runners and n not in verify.IDENTITY_NAMES]
    if unknown:
        raise DomainError(f"unknown checks {unknown}; choose from {list(runners) + list(verify.IDENTITY_NAMES)}")
    identity_subset = [n for n in names if n in verify.IDENTITY_NAMES]
    reports = []
    for name in names:
        if name in verify.IDENTITY_NAMES:
            continue
        reports.append(runners[name]())
    if identity_subset:
        reports.append(verify.check_identities(quad_spec=quad, policy=policy, tolerance=tolerance,
                                               only=identity_subset))
    return reports


def traceability_table(reports: Sequence[verify.SweepReport], timings: Sequence[float] = ()) -> str:
    lines = [f"{'check':<28s} {'claim':<58s} {'points':>8s} {'worst margin':>13s} {'result':>6s}"]
    for i, r in enumerate(reports):
        claim = CLAIMS.get(r.check_name, "")
        extra = f"  ({timings[i]:.1f}s)" if i < len(timings) else ""
        lines.append(f"{r.check_name:<28s} {claim:<58s} {r.points_tested:>8d} {r.worst_margin:>13.3e} "
                     f"{'PASS' if r.passed else 'FAIL':>6s}{extra}")
        for c in r.children:
            lines.append(f"  {c.check_name:<26s} {'':<58s} {c.points_tested:>8d} {c.worst_margin:>13.3e} "
                         f"{'PASS' if c.passed else 'FAIL':>6s}")
    return "\n".join(lines) + "\n"


def _report_suite(cfg: RunConfig, names: Sequence[str], out) -> int:
    identity_subset = [n for n in names if n in verify.IDENTITY_NAMES]
    batches = [[n] for n in names if n not in verify.IDENTITY_NAMES]
    if identity_subset:
        batches.append(identity_subset)
    reports, timings = [], []
    for batch in batches:
        t0 = time.perf_counter()
        reports.extend(run_suite(batch, cfg.tolerance, cfg.seed, cfg.random_points, cfg.policy, cfg.quad))
        timings.append(time.perf_counter() - t0)
    directory = _output_dir(cfg, default=None)
    if directory is not None:
        for r in reports:
            r.write_csv(directory / f"{r.check_name}.csv")
            r.write_json(directory / f"{r.check_name}.json")
    if cfg.output_format == "json":
        _emit(cfg, json.dumps([r.summary() for r in reports], indent=2) + "\n", out)
    elif cfg.output_format == "csv":
        rows = [(r.check_name, r.points_tested, fmt(r.worst_margin), int(r.passed)) for r in reports]
        text = "check,points,worst_margin,passed\n" + "".join(",".join(map(str, r)) + "\n" for r in rows)
        _emit(cfg, text, out)
    else:
        _emit(cfg, traceability_table(reports, timings), out)
    return EXIT_OK if reports and all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_check(cfg: RunConfig, out=None) -> int:
    return _report_suite(cfg, cfg.only or verify.CHECKS, out)


def cmd_identities(cfg: RunConfig, out=None) -> int:
    return _report_suite(cfg, cfg.only or verify.IDENTITY_NAMES, out)


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "check": cmd_check,
            "identities": cmd_identities, "figure1": cmd_figure1}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    try:
        cfg = resolve(argv)
        return COMMANDS[cfg.command](cfg, out)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (DomainError, DivergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except GgfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
