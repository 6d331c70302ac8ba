"""Property suite: bound sweeps, denominator floor, residuals, resonance.

Every check is a grid-quantified inequality with the measured value and its
tolerance stored side by side; failures are recorded, never thrown, because
partial failure information is the point of running the suite at all.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import DomainError, InvalidReportError
from .fractional_calculus import CaputoQuery, caputo, mode_second_derivative
from .solver import (
    SeriesSolution,
    classical_mode_denominator,
    evaluate,
    evaluate_mode,
    series_denominator,
)
from .spectral import graded_norm

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "C0Estimate",
    "DEFAULT_ALPHA_GRID",
    "default_t_grid",
    "lemma_bounds_sweep",
    "empirical_c0",
    "verify_solution",
    "resonance_sweep",
    "classical_zero_scan",
    "with_corrupted_mode",
]

DEFAULT_ALPHA_GRID = (1.1, 1.3, 1.5, 1.7, 1.9)


def default_t_grid(points: int = 49) -> np.ndarray:
    """Log-spaced sweep grid covering both asymptotic regimes."""
    return np.logspace(-3.0, 6.0, points)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    parameters: dict
    value: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    """Structured product of a verification run; invalid when empty."""

    checks: list[CheckRecord] = field(default_factory=list)
    empirical_c0: dict = field(default_factory=dict)
    resonance_table: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, name: str, parameters: dict, value: float, tolerance: float, passed: bool) -> None:
        self.checks.append(
            CheckRecord(name=name, parameters=parameters, value=float(value), tolerance=float(tolerance), passed=bool(passed))
        )

    def finalize(self) -> "VerificationReport":
        if not self.checks:
            raise InvalidReportError("a verification report with zero checks is invalid")
        return self

    @property
    def all_passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def merged_with(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(
            checks=self.checks + other.checks,
            empirical_c0={**self.empirical_c0, **other.empirical_c0},
            resonance_table=self.resonance_table + other.resonance_table,
            notes={**self.notes, **other.notes},
        )
        return out

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [c.to_dict() for c in self.checks],
            "empirical_c0": self.empirical_c0,
            "resonance_table": self.resonance_table,
            "notes": self.notes,
        }

    def to_json(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def render_text(self) -> str:
        lines = []
        name_w = max([len(c.name) for c in self.checks] + [4])
        header = f"{'check':<{name_w}}  {'value':>13}  {'tolerance':>13}  result  parameters"
        lines.append(header)
        lines.append("-" * len(header))
        for c in self.checks:
            params = ", ".join(f"{k}={v}" for k, v in c.parameters.items())
            lines.append(
                f"{c.name:<{name_w}}  {c.value:>13.6e}  {c.tolerance:>13.6e}  "
                f"{'pass' if c.passed else 'FAIL':<6}  {params}"
            )
        lines.append("-" * len(header))
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def resonance_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "x", "D"])
            for row in self.resonance_table:
                writer.writerow(
                    [format(row["alpha"], ".17g"), format(row["x"], ".17g"), format(row["D"], ".17g")]
                )


# ---------------------------------------------------------------------------
# Bound sweeps


def _ml_triple(alpha: float, t: float) -> tuple[float, float, float]:
    from .special_functions import mittag_leffler

    z = -(t**alpha)
    return (
        mittag_leffler(alpha, 1.0, z),
        mittag_leffler(alpha, 2.0, z),
        mittag_leffler(alpha, 3.0, z),
    )


def lemma_bounds_sweep(
    alpha_grid: Sequence[float] | None = None,
    t_grid: Sequence[float] | None = None,
) -> VerificationReport:
    """Sweep the three kernel bounds and the sign constancy of E_{a,3}.

    For every order a in (1,2) and every t > 0 on the grid the evaluator
    must satisfy |E_{a,1}(-t^a)| < 1, |E_{a,2}(-t^a)| < 1 and
    0 < E_{a,3}(-t^a) < 1/2; the records keep the tightest margins.
    """
    alphas = tuple(alpha_grid) if alpha_grid is not None else DEFAULT_ALPHA_GRID
    ts = np.asarray(t_grid if t_grid is not None else default_t_grid(), dtype=float)
    if len(alphas) == 0 or ts.size == 0:
        raise DomainError("lemma_bounds_sweep needs non-empty grids")
    if np.any(ts <= 0.0):
        raise DomainError("t grid must be positive")
    report = VerificationReport()
    for alpha in alphas:
        if not (1.0 < alpha < 2.0):
            raise DomainError(f"alpha grid entry {alpha} outside (1, 2)")
        e1 = np.empty(ts.size)
        e2 = np.empty(ts.size)
        e3 = np.empty(ts.size)
        for i, t in enumerate(ts):
            e1[i], e2[i], e3[i] = _ml_triple(alpha, float(t))
        report.add(
            "kernel_bound_abs_E1_lt_1", {"alpha": alpha, "points": ts.size},
            float(np.max(np.abs(e1))), 1.0, bool(np.max(np.abs(e1)) < 1.0),
        )
        report.add(
            "kernel_bound_abs_E2_lt_1", {"alpha": alpha, "points": ts.size},
            float(np.max(np.abs(e2))), 1.0, bool(np.max(np.abs(e2)) < 1.0),
        )
        report.add(
            "kernel_bound_E3_positive", {"alpha": alpha, "points": ts.size},
            float(np.min(e3)), 0.0, bool(np.min(e3) > 0.0),
        )
        report.add(
            "kernel_bound_E3_lt_half", {"alpha": alpha, "points": ts.size},
            float(np.max(e3)), 0.5, bool(np.max(e3) < 0.5),
        )
        signs = np.sign(e3)
        report.add(
            "kernel_E3_sign_constant", {"alpha": alpha, "points": ts.size},
            float(np.min(signs * signs[0])), 0.0, bool(np.all(signs == signs[0])),
        )
    return report.finalize()


class C0Estimate(NamedTuple):
    c0: float
    surrogate_min: float  # min of E_{a,3}(1 - E_{a,1}), the proof's lower handle
    argmin_t: float


def empirical_c0(alpha: float, t_grid: Sequence[float] | None = None) -> C0Estimate:
    """Grid minimum of the mode denominator at order ``alpha``.

    The denominator decays algebraically for t -> infinity, so this is an
    empirical floor over the sweep range, reported per order.
    """
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    ts = np.asarray(t_grid if t_grid is not None else default_t_grid(), dtype=float)
    if ts.size == 0 or np.any(ts <= 0.0):
        raise DomainError("t grid must be positive and non-empty")
    best = math.inf
    best_surrogate = math.inf
    best_t = float(ts[0])
    for t in ts:
        e1, e2, e3 = _ml_triple(alpha, float(t))
        d = e2 * e2 + e3 * (1.0 - e1)
        if d < best:
            best, best_t = d, float(t)
        best_surrogate = min(best_surrogate, e3 * (1.0 - e1))
    return C0Estimate(c0=float(best), surrogate_min=float(best_surrogate), argmin_t=best_t)


# ---------------------------------------------------------------------------
# Solution verification


def _mode_caputo_residual(
    sol: SeriesSolution, mode, ts: np.ndarray, panels: int
) -> float:
    spec = sol.spec
    alpha = spec.alpha
    lam_eff = mode.nu_k_sq

    def h2(x: float) -> float:
        # integrand-grade tolerance: accuracy near zeros of E buys nothing here
        total = 0.0
        if mode.a_k != 0.0:
            total += mode.a_k * mode_second_derivative(
                alpha, lam_eff, "cosine_like", x, ml_rel_tol=1e-9
            )
        if mode.b_k != 0.0:
            total += mode.b_k * mode_second_derivative(
                alpha, lam_eff, "sine_like", x, ml_rel_tol=1e-9
            )
        return total

    scale = max(abs(evaluate_mode(mode, alpha, float(t), spec.T)) for t in ts)
    if scale == 0.0:
        return 0.0
    worst = 0.0
    for t in ts:
        d_alpha = caputo(CaputoQuery(second_derivative=h2, alpha=alpha, t=float(t), panels=panels))
        resid = d_alpha + lam_eff * evaluate_mode(mode, alpha, float(t), spec.T)
        worst = max(worst, abs(resid) / (lam_eff * scale))
    return worst


def verify_solution(
    sol: SeriesSolution,
    t_grid_interior: Sequence[float] | None = None,
    x_grid: Sequence[float] | None = None,
    *,
    caputo_panels: int = 48,
    residual_mode_limit: int | None = 8,
) -> VerificationReport:
    """Check a computed solution against everything its derivation promises.

    Per mode: the fractional ODE residual via the independent Caputo
    quadrature, endpoint equality, and the integral-mean condition both in
    closed form and by adaptive quadrature.  Assembled: endpoint equality and
    integral condition in the coefficient norm, plus the stability envelope
    against the measured denominator floor.
    """
    spec = sol.spec
    alpha, T = spec.alpha, spec.T
    ts = np.asarray(
        t_grid_interior if t_grid_interior is not None else np.linspace(0.1, 0.9, 9) * T,
        dtype=float,
    )
    if np.any(ts <= 0.0) or np.any(ts >= T):
        raise DomainError("interior grid must lie strictly inside (0, T)")
    report = VerificationReport()

    residual_modes = sol.modes
    if residual_mode_limit is not None and len(residual_modes) > residual_mode_limit:
        # largest data coefficients dominate the residual risk
        ranked = sorted(sol.modes, key=lambda m: abs(m.phi_k), reverse=True)
        keep = {m.k for m in ranked[:residual_mode_limit]}
        keep.update({sol.modes[0].k, sol.modes[-1].k})
        residual_modes = tuple(m for m in sol.modes if m.k in keep)

    for mode in residual_modes:
        worst = _mode_caputo_residual(sol, mode, ts, caputo_panels)
        report.add(
            "mode_ode_residual", {"k": mode.k, "alpha": alpha}, worst, 1e-4, worst <= 1e-4
        )

    for mode in sol.modes:
        t0 = evaluate_mode(mode, alpha, 0.0, T)
        t1 = evaluate_mode(mode, alpha, T, T)
        scale = abs(mode.a_k) + abs(mode.b_k) * T + 1e-300
        diff = abs(t0 - t1) / scale
        report.add("mode_endpoint_equality", {"k": mode.k}, diff, 1e-12, diff <= 1e-12)

        closed = mode.a_k * T * mode.E2 + mode.b_k * T * T * mode.E3
        scale = abs(mode.phi_k) + abs(mode.a_k * T) + abs(mode.b_k * T * T) + 1e-300
        diff = abs(closed - mode.phi_k) / scale
        report.add("mode_integral_closed_form", {"k": mode.k}, diff, 1e-12, diff <= 1e-12)

    quad_modes = residual_modes
    for mode in quad_modes:
        val, _ = quad(
            lambda t: evaluate_mode(mode, alpha, t, T), 0.0, T, limit=200, epsabs=1e-12, epsrel=1e-11
        )
        scale = abs(mode.phi_k) + abs(mode.a_k) * T + 1e-300
        diff = abs(val - mode.phi_k) / scale
        report.add("mode_integral_quadrature", {"k": mode.k}, diff, 1e-8, diff <= 1e-8)

    # assembled checks in the coefficient (H) norm
    u0 = evaluate(sol, 0.0)
    uT = evaluate(sol, T)
    scale = float(np.linalg.norm(u0)) + 1e-300
    diff = float(np.linalg.norm(u0 - uT)) / scale
    report.add("endpoint_equality_H", {"K": spec.K}, diff, 1e-10, diff <= 1e-10)

    integrals = np.array(
        [m.a_k * T * m.E2 + m.b_k * T * T * m.E3 for m in sol.modes]
    )
    phi_vec = np.array([m.phi_k for m in sol.modes])
    scale = float(np.linalg.norm(phi_vec)) + 1e-300
    diff = float(np.linalg.norm(integrals - phi_vec)) / scale
    report.add("integral_condition_H", {"K": spec.K}, diff, 1e-10, diff <= 1e-10)

    lam = np.array([m.lambda_k for m in sol.modes])
    norm_aphi = graded_norm(phi_vec, lam, 1.0)
    c0 = empirical_c0(alpha)
    report.empirical_c0[str(alpha)] = {
        "c0": c0.c0,
        "surrogate_min": c0.surrogate_min,
        "argmin_t": c0.argmin_t,
    }
    if norm_aphi > 0.0:
        envelope = 2.0 / (c0.c0 * T) * norm_aphi
        worst_ratio = 0.0
        for t in np.concatenate(([0.0], ts, [T])):
            norm_au = graded_norm(evaluate(sol, float(t)), lam, 1.0)
            worst_ratio = max(worst_ratio, norm_au / envelope)
        report.add(
            "stability_envelope",
            {"alpha": alpha, "T": T, "c0": c0.c0},
            worst_ratio,
            1.0,
            worst_ratio <= 1.0,
        )
        report.notes["stability_measured_gain"] = float(
            worst_ratio * envelope / norm_aphi
        )

    if x_grid is not None and spec.spectrum.kind != "synthetic":
        from .solver import evaluate_at

        worst = 0.0
        for x in x_grid:
            worst = max(worst, abs(evaluate_at(sol, 0.0, x) - evaluate_at(sol, T, x)))
        u_scale = max(abs(v) for v in (evaluate_at(sol, 0.0, x) for x in x_grid)) + 1e-300
        report.add(
            "endpoint_equality_pointwise", {"points": len(list(x_grid))},
            worst / u_scale, 1e-10, worst / u_scale <= 1e-10,
        )

    return report.finalize()


# ---------------------------------------------------------------------------
# Resonance contrast


def _fractional_denominator_at_x(alpha: float, x: float, T: float) -> float:
    """Denominator parametrized by x = nu_k * T at fixed horizon T."""
    nu_k_sq = (x / T) ** 2
    return series_denominator(alpha, -nu_k_sq * T**alpha)


def resonance_sweep(
    nu: float,
    T: float,
    alpha_grid: Sequence[float] = (1.5, 1.9, 1.99, 1.999),
    mode_x_values: Sequence[float] | None = None,
) -> VerificationReport:
    """Denominator floor across orders at fixed nu*T, with the order-2 row.

    For orders inside (1,2) the minimum over the mode frequencies stays
    positive however nu*T is chosen; the order-2 closed form vanishes exactly
    when some nu_k*T hits 2*pi*n.  The per-order minima land in
    ``resonance_table`` and the monotone trend toward 2 is recorded as data.
    """
    if nu <= 0.0 or T <= 0.0:
        raise DomainError("nu and T must be positive")
    if mode_x_values is None:
        k = np.arange(1, 33, dtype=float)
        lam = k**2
        mode_x_values = nu * T * np.sqrt(lam / (1.0 + lam))
    xs = np.asarray(mode_x_values, dtype=float)
    if xs.size == 0 or np.any(xs <= 0.0):
        raise DomainError("mode_x_values must be positive and non-empty")
    report = VerificationReport()
    minima: dict[float, float] = {}
    for alpha in alpha_grid:
        if not (1.0 < alpha < 2.0):
            raise DomainError(f"fractional grid entry {alpha} outside (1, 2)")
        ds = np.array([_fractional_denominator_at_x(alpha, float(x), T) for x in xs])
        for x, d in zip(xs, ds):
            report.resonance_table.append({"alpha": float(alpha), "x": float(x), "D": float(d)})
        dmin = float(np.min(ds))
        minima[float(alpha)] = dmin
        report.add(
            "fractional_denominator_positive",
            {"alpha": float(alpha), "nu_T": nu * T},
            dmin,
            0.0,
            dmin > 0.0,
        )
    # the mode frequencies approach nu*T strictly from below; the limit point
    # itself is where the order-2 resonance lives, so include it
    xs_classical = np.append(xs, nu * T)
    for x in xs_classical:
        report.resonance_table.append(
            {"alpha": 2.0, "x": float(x), "D": float(classical_mode_denominator(float(x)))}
        )
    d_limit = classical_mode_denominator(nu * T)
    n_near = round(nu * T / (2.0 * math.pi))
    if n_near >= 1 and abs(nu * T - 2.0 * math.pi * n_near) < 1e-9:
        report.add(
            "classical_denominator_zero_at_resonance",
            {"x": nu * T},
            d_limit,
            1e-12,
            d_limit <= 1e-12,
        )
    else:
        report.add(
            "classical_denominator_positive_off_resonance",
            {"x": nu * T},
            d_limit,
            0.0,
            d_limit > 0.0,
        )
    ordered = [minima[a] for a in sorted(minima)]
    report.notes["fractional_minima_by_alpha"] = {str(a): minima[a] for a in sorted(minima)}
    report.notes["monotone_decreasing_toward_2"] = bool(
        all(ordered[i] >= ordered[i + 1] for i in range(len(ordered) - 1))
    )
    return report.finalize()


def classical_zero_scan(
    x_max: float = 6.0 * math.pi, points: int = 10_000
) -> list[float]:
    """Zeros of the order-2 denominator on (0, x_max].

    Samples the squared-sinc form, refines every local minimum, and keeps
    the locations where the refined value sinks below 1e-10 * x^-2.
    """
    if points < 10:
        raise DomainError("points must be >= 10")
    step = x_max / points
    # pad past the endpoint so a zero sitting exactly at x_max is still a
    # detectable interior minimum of the sampled sequence
    xs = np.linspace(step, x_max + 2 * step, points + 2)
    ds = np.array([classical_mode_denominator(float(x)) for x in xs])
    zeros = []
    for i in range(1, xs.size - 1):
        if ds[i] <= ds[i - 1] and ds[i] <= ds[i + 1]:
            res = minimize_scalar(
                lambda x: classical_mode_denominator(float(x)),
                bounds=(float(xs[i - 1]), float(xs[i + 1])),
                method="bounded",
                options={"xatol": 1e-12},
            )
            x_star = float(res.x)
            if x_star <= x_max + 0.5 * step and classical_mode_denominator(x_star) < 1e-10 / (
                x_star * x_star
            ):
                zeros.append(x_star)
    merged: list[float] = []
    for z in zeros:
        if not merged or abs(z - merged[-1]) > 1e-6:
            merged.append(z)
    return merged


def with_corrupted_mode(sol: SeriesSolution, k: int = 1, b_factor: float = 1.01) -> SeriesSolution:
    """Fault-injection helper: scales b_k of one mode for negative tests."""
    modes = []
    for m in sol.modes:
        if m.k == k:
            from dataclasses import replace

            modes.append(replace(m, b_k=m.b_k * b_factor))
        else:
            modes.append(m)
    return SeriesSolution(spec=sol.spec, modes=tuple(modes), tail_bound=sol.tail_bound)
