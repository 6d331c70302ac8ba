"""Orchestration shared by the command-line front end and the HTTP service."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .solver import ProblemSpec, SeriesSolution, evaluate, solve
from .spectral import PhiData
from .verification import (
    VerificationReport,
    empirical_c0,
    lemma_bounds_sweep,
    resonance_sweep,
    verify_solution,
)

__all__ = ["run_solve", "run_verify", "run_bounds", "run_resonance"]


def run_solve(
    spec: ProblemSpec, time_points: int = 101
) -> tuple[SeriesSolution, np.ndarray, np.ndarray, float]:
    """Solve and sample the mode series on a uniform grid including both ends."""
    sol = solve(spec)
    times = np.linspace(0.0, spec.T, time_points)
    series = np.array([evaluate(sol, float(t)) for t in times])
    max_abs_u = float(np.max(np.linalg.norm(series, axis=1))) if series.size else 0.0
    return sol, times, series, max_abs_u


def _linearity_check(spec: ProblemSpec, seed: int, report: VerificationReport) -> None:
    """Seeded spot check that the solve map is linear in the data."""
    rng = np.random.default_rng(seed)
    k = min(spec.K, 6)
    c1 = rng.standard_normal(k)
    c2 = rng.standard_normal(k)
    w1, w2 = rng.standard_normal(2)
    base = dict(
        alpha=spec.alpha, nu=spec.nu, T=spec.T, spectrum=spec.spectrum, K=spec.K, tol=spec.tol
    )
    phi1 = PhiData.from_coefficients({i + 1: float(c1[i]) for i in range(k)})
    phi2 = PhiData.from_coefficients({i + 1: float(c2[i]) for i in range(k)})
    phi12 = PhiData.from_coefficients(
        {i + 1: float(w1 * c1[i] + w2 * c2[i]) for i in range(k)}
    )
    sol1 = solve(ProblemSpec(phi=phi1, **base))
    sol2 = solve(ProblemSpec(phi=phi2, **base))
    sol12 = solve(ProblemSpec(phi=phi12, **base))
    worst = 0.0
    for t in (0.0, 0.25 * spec.T, 0.7 * spec.T, spec.T):
        u1 = evaluate(sol1, t)
        u2 = evaluate(sol2, t)
        u12 = evaluate(sol12, t)
        combo = w1 * u1 + w2 * u2
        scale = float(np.max(np.abs(combo))) + 1e-300
        worst = max(worst, float(np.max(np.abs(u12 - combo))) / scale)
    report.add("solve_linearity", {"seed": seed, "modes": k}, worst, 1e-11, worst <= 1e-11)


def run_verify(
    spec: ProblemSpec,
    *,
    interior_points: int = 9,
    alpha_grid: Sequence[float] | None = None,
    sweep_points: int = 49,
    seed: int = 0,
) -> VerificationReport:
    """Solution residual suite plus the kernel bound sweep and denominator floor."""
    ts = np.linspace(0.1, 0.9, interior_points) * spec.T
    report = verify_solution(solve(spec), t_grid_interior=ts)
    sweep_t = np.logspace(-3.0, 6.0, sweep_points)
    alphas = tuple(alpha_grid) if alpha_grid is not None else None
    bounds = lemma_bounds_sweep(alpha_grid=alphas, t_grid=sweep_t)
    report = report.merged_with(bounds)
    from .verification import DEFAULT_ALPHA_GRID

    for alpha in alphas if alphas is not None else DEFAULT_ALPHA_GRID:
        est = empirical_c0(alpha, sweep_t)
        report.empirical_c0[str(alpha)] = {
            "c0": est.c0,
            "surrogate_min": est.surrogate_min,
            "argmin_t": est.argmin_t,
        }
        report.add(
            "empirical_c0_positive", {"alpha": alpha, "points": sweep_points},
            est.c0, 0.0, est.c0 > 0.0,
        )
    _linearity_check(spec, seed, report)
    return report.finalize()


def run_bounds(
    alphas: Sequence[float], t_min: float, t_max: float, points: int
) -> VerificationReport:
    ts = np.logspace(math.log10(t_min), math.log10(t_max), points)
    report = lemma_bounds_sweep(alpha_grid=alphas, t_grid=ts)
    for alpha in alphas:
        est = empirical_c0(alpha, ts)
        report.empirical_c0[str(alpha)] = {
            "c0": est.c0,
            "surrogate_min": est.surrogate_min,
            "argmin_t": est.argmin_t,
        }
        report.add(
            "empirical_c0_positive", {"alpha": alpha, "points": points},
            est.c0, 0.0, est.c0 > 0.0,
        )
    return report.finalize()


def run_resonance(
    nu: float, T: float, alphas: Sequence[float], points: int
) -> VerificationReport:
    k = np.arange(1, points + 1, dtype=float)
    lam = k**2
    xs = nu * T * np.sqrt(lam / (1.0 + lam))
    return resonance_sweep(nu, T, alpha_grid=tuple(alphas), mode_x_values=xs)
