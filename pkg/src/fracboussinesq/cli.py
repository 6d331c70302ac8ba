"""Command-line front end: solve, verify, resonance, ml, bounds, serve.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 runtime numeric failure.
"""

from __future__ import annotations

import functools
import os
import sys

import click
import mpmath as mp

from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    DomainError,
    InvalidReportError,
    RefusalError,
)
from .runner import run_bounds, run_resonance, run_solve, run_verify
from .schemas import ConfigError, load_run_config
from .solver import write_series_csv, write_solution_json
from .special_functions import MLQuery, mittag_leffler, ml_oracle

_NUMERIC_ERRORS = (
    ConvergenceError,
    DegenerateDenominatorError,
    InvalidReportError,
    RefusalError,
    ArithmeticError,
    OverflowError,
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except DomainError as exc:
            click.echo(f"usage error: {exc}", err=True)
            sys.exit(2)
        except _NUMERIC_ERRORS as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(3)

    return wrapper


@click.group()
def main() -> None:
    """Series solver and verification suite for the non-local fractional
    Boussinesq-type problem."""


def _resolve(base_dir: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


@main.command()
@click.argument("config_path", type=click.Path())
@_exit_codes
def solve(config_path: str) -> None:
    """Solve the configured problem; write solution JSON and time-series CSV."""
    cfg, base_dir = load_run_config(config_path)
    spec = cfg.problem.to_spec(base_dir)
    sol, times, _series, max_abs_u = run_solve(spec, cfg.grid.time_points)
    write_solution_json(sol, _resolve(base_dir, cfg.output.solution_json))
    write_series_csv(sol, _resolve(base_dir, cfg.output.series_csv), times)
    click.echo(f"modes={spec.K} tail_bound={_fmt(sol.tail_bound)} max|u|={_fmt(max_abs_u)}")


@main.command()
@click.argument("config_path", type=click.Path())
@_exit_codes
def verify(config_path: str) -> None:
    """Run the full verification suite on the configured problem.

    Exits 0 only if every check passes; the report is written either way.
    """
    cfg, base_dir = load_run_config(config_path)
    spec = cfg.problem.to_spec(base_dir)
    report = run_verify(
        spec,
        interior_points=cfg.grid.interior_points,
        alpha_grid=cfg.grid.alpha_grid,
        sweep_points=cfg.grid.sweep_points,
        seed=cfg.seed,
    )
    report.to_json(_resolve(base_dir, cfg.output.report_json))
    text = report.render_text()
    with open(_resolve(base_dir, cfg.output.report_txt), "w") as fh:
        fh.write(text + "\n")
    click.echo(text)
    if not report.all_passed:
        failed = [c.name for c in report.checks if not c.passed]
        click.echo(f"failed checks: {', '.join(sorted(set(failed)))}", err=True)
        sys.exit(1)


@main.command()
@click.option("--nu", type=float, required=True, help="coefficient nu > 0")
@click.option("--t", "horizon", type=float, required=True, help="time horizon T > 0")
@click.option(
    "--alpha-list",
    default="1.5,1.9,1.99,1.999",
    show_default=True,
    help="comma-separated fractional orders inside (1, 2)",
)
@click.option("--points", type=int, default=32, show_default=True, help="mode count")
@click.option("--output", type=click.Path(), default=None, help="CSV path (default stdout)")
@_exit_codes
def resonance(nu: float, horizon: float, alpha_list: str, points: int, output: str | None) -> None:
    """Denominator table alpha,x,D across orders, order 2 included."""
    if points < 1:
        raise DomainError("--points must be >= 1")
    try:
        alphas = [float(a) for a in alpha_list.split(",") if a.strip()]
    except ValueError as exc:
        raise DomainError(f"--alpha-list: {exc}") from exc
    if not alphas:
        raise DomainError("--alpha-list must name at least one order")
    report = run_resonance(nu, horizon, alphas, points)
    lines = ["alpha,x,D"]
    for row in report.resonance_table:
        lines.append(f"{_fmt(row['alpha'])},{_fmt(row['x'])},{_fmt(row['D'])}")
    text = "\n".join(lines)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.option("--rho", type=float, required=True)
@click.option("--mu", type=float, required=True)
@click.option("--z", type=float, required=True)
@click.option("--oracle", "oracle_digits", type=int, default=None, help="cross-check digits (>= 50)")
@_exit_codes
def ml(rho: float, mu: float, z: float, oracle_digits: int | None) -> None:
    """Evaluate E_{rho,mu}(z) on the non-positive axis."""
    value = mittag_leffler(rho, mu, z)
    click.echo(_fmt(value))
    if oracle_digits is not None:
        result = ml_oracle(MLQuery(rho, mu, z), significant_digits=oracle_digits)
        rel = float(abs(mp.mpf(value) - result.value) / (abs(result.value) + mp.mpf("1e-300")))
        click.echo(f"oracle[{result.method}] {mp.nstr(result.value, oracle_digits)}")
        click.echo(f"relative_difference {_fmt(rel)}")


@main.command()
@click.option(
    "--alpha-list",
    default="1.1,1.3,1.5,1.7,1.9",
    show_default=True,
    help="comma-separated fractional orders inside (1, 2)",
)
@click.option("--t-min", type=float, default=1e-3, show_default=True)
@click.option("--t-max", type=float, default=1e6, show_default=True)
@click.option("--points", type=int, default=49, show_default=True)
@click.option("--output", type=click.Path(), default=None, help="report JSON path")
@_exit_codes
def bounds(alpha_list: str, t_min: float, t_max: float, points: int, output: str | None) -> None:
    """Sweep the kernel bounds and the denominator floor; exit 1 on violation."""
    if points < 2:
        raise DomainError("--points must be >= 2")
    if not (0.0 < t_min < t_max):
        raise DomainError("need 0 < --t-min < --t-max")
    try:
        alphas = [float(a) for a in alpha_list.split(",") if a.strip()]
    except ValueError as exc:
        raise DomainError(f"--alpha-list: {exc}") from exc
    if not alphas:
        raise DomainError("--alpha-list must name at least one order")
    report = run_bounds(alphas, t_min, t_max, points)
    if output:
        report.to_json(output)
    click.echo(report.render_text())
    if not report.all_passed:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("fracboussinesq.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
