"""Explicit mode-by-mode solution of the non-local problem.

Each Fourier mode obeys a fractional oscillator equation whose general
solution combines two Mittag-Leffler kernels; the endpoint-equality and
integral-mean conditions fix the two coefficients in closed form.  The
denominator shared by both coefficients is strictly positive for orders
inside (1, 2), which is exactly what makes the problem well-posed there,
and vanishes at the classical resonances when the order reaches 2.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateDenominatorError, DomainError
from .special_functions import mittag_leffler
from .spectral import PhiData, SpectrumModel, eigenvalues, expand, synthesize

__all__ = [
    "ProblemSpec",
    "ModeSolution",
    "SeriesSolution",
    "effective_frequency",
    "series_denominator",
    "mode_coefficients",
    "evaluate_mode",
    "solve",
    "evaluate",
    "evaluate_at",
    "classical_mode_denominator",
    "solution_to_dict",
    "write_series_csv",
]


@dataclass(frozen=True)
class ProblemSpec:
    """One non-local problem instance."""

    alpha: float
    nu: float
    T: float
    spectrum: SpectrumModel
    phi: PhiData
    K: int
    tol: float = 1e-8

    def __post_init__(self) -> None:
        if not (1.0 < self.alpha < 2.0):
            raise DomainError(
                f"alpha must lie strictly inside (1, 2), got {self.alpha}; "
                "the order-2 case is served by classical_mode_denominator"
            )
        if self.nu <= 0.0 or not math.isfinite(self.nu):
            raise DomainError(f"nu must be positive, got {self.nu}")
        if self.T <= 0.0 or not math.isfinite(self.T):
            raise DomainError(f"T must be positive, got {self.T}")
        if self.K < 1:
            raise DomainError(f"K must be >= 1, got {self.K}")
        if self.tol <= 0.0:
            raise DomainError("tol must be positive")


@dataclass(frozen=True)
class ModeSolution:
    """Per-mode quantities of the explicit solution."""

    k: int
    lambda_k: float
    nu_k_sq: float
    E1: float
    E2: float
    E3: float
    D_k: float
    a_k: float
    b_k: float
    phi_k: float


@dataclass(frozen=True)
class SeriesSolution:
    spec: ProblemSpec
    modes: tuple[ModeSolution, ...]
    tail_bound: float


def effective_frequency(nu: float, lambda_k: float) -> float:
    """Squared per-mode frequency nu_k^2 = nu^2 * lambda_k / (1 + lambda_k)."""
    if nu <= 0.0 or lambda_k <= 0.0:
        raise DomainError("effective_frequency needs nu > 0 and lambda_k > 0")
    return nu * nu * lambda_k / (1.0 + lambda_k)


def series_denominator(alpha: float, z: float) -> float:
    """E_{a,2}(z)^2 + E_{a,3}(z) (1 - E_{a,1}(z)) at argument z <= 0."""
    e1 = mittag_leffler(alpha, 1.0, z)
    e2 = mittag_leffler(alpha, 2.0, z)
    e3 = mittag_leffler(alpha, 3.0, z)
    return e2 * e2 + e3 * (1.0 - e1)


def mode_coefficients(
    alpha: float, nu_k_sq: float, T: float, phi_k: float
) -> tuple[float, float, float]:
    """Closed-form (a_k, b_k, D_k) for one mode.

    Both defining conditions are re-checked numerically; a violation beyond
    1e-12 relative or a collapsed denominator signals a bug rather than bad
    data and raises accordingly.
    """
    if not (1.0 < alpha < 2.0):
        raise DomainError("alpha must lie in (1, 2)")
    if nu_k_sq <= 0.0 or T <= 0.0:
        raise DomainError("nu_k_sq and T must be positive")
    z = -nu_k_sq * T**alpha
    e1 = mittag_leffler(alpha, 1.0, z)
    e2 = mittag_leffler(alpha, 2.0, z)
    e3 = mittag_leffler(alpha, 3.0, z)
    d = e2 * e2 + e3 * (1.0 - e1)
    if not (d > 1e-300):
        raise DegenerateDenominatorError(
            f"mode denominator {d} collapsed at alpha={alpha}, nu_k^2={nu_k_sq}, T={T}"
        )
    a = phi_k * e2 / (T * d)
    b = phi_k * (1.0 - e1) / (T * T * d)
    r1 = a * (1.0 - e1) - b * T * e2
    s1 = abs(a) * (1.0 + abs(e1)) + abs(b * T * e2) + 1e-300
    r2 = a * T * e2 + b * T * T * e3 - phi_k
    s2 = abs(a * T * e2) + abs(b * T * T * e3) + abs(phi_k) + 1e-300
    if abs(r1) > 1e-12 * s1 or abs(r2) > 1e-12 * s2:
        raise ArithmeticError(
            f"mode coefficient identities violated: residuals {r1:.3e}, {r2:.3e}"
        )
    return a, b, d


def evaluate_mode(mode: ModeSolution, alpha: float, t: float, T: float) -> float:
    """T_k(t) = a_k E_{a,1}(-nu_k^2 t^a) + b_k t E_{a,2}(-nu_k^2 t^a)."""
    if not (0.0 <= t <= T):
        raise DomainError(f"t={t} outside [0, {T}]")
    if t == 0.0:
        return mode.a_k
    z = -mode.nu_k_sq * t**alpha
    return mode.a_k * mittag_leffler(alpha, 1.0, z) + mode.b_k * t * mittag_leffler(
        alpha, 2.0, z
    )


def _worker_count() -> int:
    raw = os.environ.get("FRACB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n


def _build_mode(spec: ProblemSpec, k: int, lam: float, phi_k: float) -> ModeSolution:
    nu_k_sq = effective_frequency(spec.nu, lam)
    z = -nu_k_sq * spec.T**spec.alpha
    e1 = mittag_leffler(spec.alpha, 1.0, z)
    e2 = mittag_leffler(spec.alpha, 2.0, z)
    e3 = mittag_leffler(spec.alpha, 3.0, z)
    a, b, d = mode_coefficients(spec.alpha, nu_k_sq, spec.T, phi_k)
    return ModeSolution(
        k=k, lambda_k=lam, nu_k_sq=nu_k_sq, E1=e1, E2=e2, E3=e3, D_k=d, a_k=a, b_k=b, phi_k=phi_k
    )


def _tail_graded_sum(spec: ProblemSpec, coeffs_k: np.ndarray) -> float:
    """sum_{k>K} lambda_k^2 |phi_k|^2 over the available data."""
    phi = spec.phi
    if phi.coefficients is not None:
        beyond = [k for k in phi.coefficients if k > spec.K]
        if not beyond:
            return 0.0
        k_max = max(beyond)
        lam = eigenvalues(spec.spectrum, k_max)
        return float(sum((lam[k - 1] * phi.coefficients[k]) ** 2 for k in beyond))
    k_probe = 2 * spec.K
    coeffs, _ = expand(phi, spec.spectrum, k_probe)
    lam = eigenvalues(spec.spectrum, k_probe)
    return float(np.sum((lam[spec.K :] * coeffs[spec.K :]) ** 2))


def _tail_constant(spec: ProblemSpec) -> float:
    """Bound constant C with |T_k(t)| <= C |phi_k| / T for all tail modes.

    Uses |E_{a,1}|, |E_{a,2}| < 1 and 1 - E_{a,1} < 2, with the denominator
    floor taken over the tail-mode frequency range.
    """
    lam_k = float(eigenvalues(spec.spectrum, spec.K)[-1])
    lo = effective_frequency(spec.nu, lam_k)
    hi = spec.nu * spec.nu
    d_floor = math.inf
    for w in np.linspace(lo, hi, 33):
        d_floor = min(d_floor, series_denominator(spec.alpha, -w * spec.T**spec.alpha))
    if not (d_floor > 0.0):
        raise DegenerateDenominatorError("tail denominator floor is not positive")
    return 3.0 / d_floor


def solve(spec: ProblemSpec) -> SeriesSolution:
    """Assemble the truncated series solution with a tail-error bound.

    Mode computations are independent; FRACB_THREADS > 1 runs them on a
    thread pool, any other value keeps them sequential.
    """
    coeffs, _report = expand(spec.phi, spec.spectrum, spec.K, tol=min(spec.tol, 1e-10))
    lam = eigenvalues(spec.spectrum, spec.K)
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            modes = list(
                pool.map(
                    lambda i: _build_mode(spec, i + 1, float(lam[i]), float(coeffs[i])),
                    range(spec.K),
                )
            )
    else:
        modes = [_build_mode(spec, i + 1, float(lam[i]), float(coeffs[i])) for i in range(spec.K)]
    tail_sq = _tail_graded_sum(spec, coeffs)
    tail_bound = 0.0
    if tail_sq > 0.0:
        tail_bound = _tail_constant(spec) / spec.T * math.sqrt(tail_sq)
    return SeriesSolution(spec=spec, modes=tuple(modes), tail_bound=tail_bound)


def evaluate(sol: SeriesSolution, t: float) -> np.ndarray:
    """Coefficient vector (T_1(t), ..., T_K(t))."""
    spec = sol.spec
    return np.array([evaluate_mode(m, spec.alpha, t, spec.T) for m in sol.modes])


def evaluate_at(sol: SeriesSolution, t: float, x, y=None):
    """Pointwise value sum_k T_k(t) v_k(x)."""
    return synthesize(evaluate(sol, t), sol.spec.spectrum, x, y)


def classical_mode_denominator(x: float) -> float:
    """Order-2 denominator 2(1 - cos x)/x^2, written as a squared sinc.

    Vanishes exactly at x = 2*pi*n: these are the resonances that destroy
    well-posedness in the classical problem and have no analogue for orders
    inside (1, 2).
    """
    if x <= 0.0:
        raise DomainError("x must be positive")
    h = math.sin(0.5 * x) / (0.5 * x)
    return h * h


# ---------------------------------------------------------------------------
# Export formats


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def solution_to_dict(sol: SeriesSolution) -> dict:
    spec = sol.spec
    return {
        "alpha": spec.alpha,
        "nu": spec.nu,
        "T": spec.T,
        "K": spec.K,
        "spectrum": {
            "kind": spec.spectrum.kind,
            "c": spec.spectrum.c,
            "p": spec.spectrum.p,
            "L": spec.spectrum.L,
            "L1": spec.spectrum.L1,
            "L2": spec.spectrum.L2,
        },
        "tail_bound": sol.tail_bound,
        "modes": [
            {
                "k": m.k,
                "lambda_k": m.lambda_k,
                "nu_k_sq": m.nu_k_sq,
                "E1": m.E1,
                "E2": m.E2,
                "E3": m.E3,
                "D_k": m.D_k,
                "a_k": m.a_k,
                "b_k": m.b_k,
                "phi_k": m.phi_k,
            }
            for m in sol.modes
        ],
    }


def write_solution_json(sol: SeriesSolution, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(solution_to_dict(sol), fh, indent=2)
        fh.write("\n")


def write_series_csv(sol: SeriesSolution, path: str, times: Iterable[float]) -> None:
    """Time series ``t, T_1(t), ..., T_K(t)`` with 17-significant-digit cells."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"T_{m.k}" for m in sol.modes])
        for t in times:
            row = evaluate(sol, float(t))
            writer.writerow([_fmt(t)] + [_fmt(v) for v in row])
