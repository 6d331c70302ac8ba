"""Eigenpair models of the spatial operator and Fourier expansion machinery.

The abstract operator enters only through its eigenvalues and orthonormal
eigenfunctions, so a model is either a synthetic positive sequence
``lambda_k = c*k**p`` (coefficient space only) or a Dirichlet Laplacian on an
interval or rectangle with the classical sine eigenfunctions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError, DomainError

__all__ = [
    "SpectrumModel",
    "PhiData",
    "TailReport",
    "DomainMembershipWarning",
    "eigenvalues",
    "eigenfunction",
    "expand",
    "synthesize",
    "graded_norm",
    "orthonormality_defect",
]


class DomainMembershipWarning(UserWarning):
    """Graded coefficients are not decaying; the data may sit outside D(A)."""


@dataclass(frozen=True)
class SpectrumModel:
    """Eigenvalue/eigenfunction source.

    kind 'synthetic' has no spatial domain; 'dirichlet_1d' lives on (0, L);
    'dirichlet_2d' on (0, L1) x (0, L2) with the doubly indexed eigenpairs
    sorted increasingly, ties broken lexicographically by (m, n).
    """

    kind: str
    c: float = 1.0
    p: float = 2.0
    L: float = math.pi
    L1: float = math.pi
    L2: float = math.pi

    def __post_init__(self) -> None:
        if self.kind not in ("synthetic", "dirichlet_1d", "dirichlet_2d"):
            raise DomainError(f"unknown spectrum kind {self.kind!r}")
        if self.kind == "synthetic" and (self.c <= 0.0 or self.p <= 0.0):
            raise DomainError("synthetic spectrum needs c > 0 and p > 0")
        if self.kind == "dirichlet_1d" and self.L <= 0.0:
            raise DomainError("dirichlet_1d needs L > 0")
        if self.kind == "dirichlet_2d" and (self.L1 <= 0.0 or self.L2 <= 0.0):
            raise DomainError("dirichlet_2d needs L1 > 0 and L2 > 0")

    @classmethod
    def synthetic(cls, c: float = 1.0, p: float = 2.0) -> "SpectrumModel":
        return cls(kind="synthetic", c=c, p=p)

    @classmethod
    def dirichlet_1d(cls, length: float = math.pi) -> "SpectrumModel":
        return cls(kind="dirichlet_1d", L=length)

    @classmethod
    def dirichlet_2d(cls, length1: float, length2: float) -> "SpectrumModel":
        return cls(kind="dirichlet_2d", L1=length1, L2=length2)

    # -- enumeration ---------------------------------------------------

    def index_pairs(self, count: int) -> list[tuple[int, int]]:
        """First ``count`` (m, n) pairs of the 2D model in enumeration order."""
        if self.kind != "dirichlet_2d":
            raise DomainError("index_pairs applies to dirichlet_2d only")
        a = (math.pi / self.L1) ** 2
        b = (math.pi / self.L2) ** 2
        side = max(8, int(math.ceil(math.sqrt(count))) + 2)
        while True:
            pairs = sorted(
                ((a * m * m + b * n * n, m, n) for m in range(1, side + 1) for n in range(1, side + 1))
            )
            # the smallest eigenvalue outside the index box
            outside = min((side + 1) ** 2 * a + b, a + (side + 1) ** 2 * b)
            if len(pairs) >= count and pairs[count - 1][0] < outside:
                return [(m, n) for _, m, n in pairs[:count]]
            side *= 2


def eigenvalues(model: SpectrumModel, count: int) -> np.ndarray:
    """First ``count`` eigenvalues in enumeration order."""
    if count < 1:
        raise DomainError("count must be >= 1")
    k = np.arange(1, count + 1, dtype=float)
    if model.kind == "synthetic":
        return model.c * k**model.p
    if model.kind == "dirichlet_1d":
        return (k * math.pi / model.L) ** 2
    a = (math.pi / model.L1) ** 2
    b = (math.pi / model.L2) ** 2
    return np.array([a * m * m + b * n * n for m, n in model.index_pairs(count)])


def eigenfunction(model: SpectrumModel, k: int, x, y=None):
    """Value of the k-th orthonormal eigenfunction (1-based)."""
    if model.kind == "synthetic":
        raise DomainError("synthetic spectra have no spatial eigenfunctions")
    if model.kind == "dirichlet_1d":
        x = np.asarray(x, dtype=float)
        _check_interval(x, model.L)
        return np.sqrt(2.0 / model.L) * np.sin(k * math.pi * x / model.L)
    if y is None:
        raise DomainError("dirichlet_2d eigenfunctions need both x and y")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_interval(x, model.L1)
    _check_interval(y, model.L2)
    m, n = model.index_pairs(k)[k - 1]
    norm = 2.0 / math.sqrt(model.L1 * model.L2)
    return norm * np.sin(m * math.pi * x / model.L1) * np.sin(n * math.pi * y / model.L2)


def _check_interval(x: np.ndarray, length: float) -> None:
    if np.any(x < 0.0) or np.any(x > length):
        raise DomainError(f"spatial point outside [0, {length}]")


# ---------------------------------------------------------------------------
# Data vectors


@dataclass(frozen=True)
class PhiData:
    """Data vector: exactly one of coefficient form, sampled form, callable."""

    coefficients: dict[int, float] | None = None
    sample_points: tuple | None = None  # (x,) or (x, y) arrays for a tensor grid
    sample_values: np.ndarray | None = None
    func: Callable | None = None

    def __post_init__(self) -> None:
        forms = sum(
            1 for f in (self.coefficients, self.sample_values, self.func) if f is not None
        )
        if forms != 1:
            raise DomainError("PhiData needs exactly one of coefficients, samples, func")
        if self.sample_values is not None and self.sample_points is None:
            raise DomainError("sampled PhiData needs sample_points")
        if self.coefficients is not None:
            for k, v in self.coefficients.items():
                if int(k) < 1:
                    raise DomainError(f"coefficient index {k} must be >= 1")
                if not math.isfinite(v):
                    raise DomainError(f"coefficient {k} is not finite")

    @classmethod
    def zero(cls) -> "PhiData":
        return cls(coefficients={})

    @classmethod
    def from_coefficients(cls, coeffs: dict) -> "PhiData":
        return cls(coefficients={int(k): float(v) for k, v in coeffs.items()})

    @classmethod
    def from_samples_1d(cls, x: Sequence[float], values: Sequence[float]) -> "PhiData":
        x = np.asarray(x, dtype=float)
        v = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 4:
            raise DomainError("1d samples need matching 1d arrays with >= 4 points")
        order = np.argsort(x)
        return cls(sample_points=(x[order],), sample_values=v[order])

    @classmethod
    def from_samples_2d(cls, x, y, values) -> "PhiData":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        v = np.asarray(values, dtype=float)
        if v.shape != (x.size, y.size):
            raise DomainError("2d samples need values shaped (len(x), len(y)) on a tensor grid")
        return cls(sample_points=(x, y), sample_values=v)

    @classmethod
    def from_callable(cls, f: Callable) -> "PhiData":
        return cls(func=f)

    def as_callable(self, model: SpectrumModel) -> Callable:
        """Evaluable representation on the model's spatial domain."""
        if self.func is not None:
            return self.func
        if self.sample_values is None:
            raise DomainError("coefficient-form data has no spatial representation")
        if model.kind == "dirichlet_1d":
            from scipy.interpolate import CubicSpline

            (x,) = self.sample_points
            return CubicSpline(x, self.sample_values)
        if model.kind == "dirichlet_2d":
            from scipy.interpolate import RectBivariateSpline

            x, y = self.sample_points
            spl = RectBivariateSpline(x, y, self.sample_values)
            return lambda xx, yy: spl(xx, yy, grid=False)
        raise DomainError("sampled data needs a spatial model")


@dataclass(frozen=True)
class TailReport:
    """Diagnostics attached to an expansion."""

    graded_sum: float  # sum_{k<=K} lambda_k^2 |phi_k|^2
    last_coefficient: float
    decay_ratio: float  # graded weight of the last quarter vs the first quarter
    panels: int = 0


def expand(
    phi: PhiData,
    model: SpectrumModel,
    count: int,
    *,
    tol: float = 1e-10,
    max_panels: int = 512,
) -> tuple[np.ndarray, TailReport]:
    """First ``count`` Fourier coefficients of ``phi`` plus a tail report.

    Coefficient-form data passes through exactly; spatial data is integrated
    against the eigenfunctions by composite Gauss-Legendre quadrature whose
    panel count doubles until successive coefficient sets agree to ``tol``.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if phi.coefficients is not None:
        coeffs = np.zeros(count)
        for k, v in phi.coefficients.items():
            if k <= count:
                coeffs[k - 1] = v
    else:
        coeffs = _quadrature_coefficients(phi, model, count, tol, max_panels)
    lam = eigenvalues(model, count)
    graded = (lam * coeffs) ** 2
    graded_sum = float(np.sum(graded))
    quarter = max(1, count // 4)
    head = float(np.sum(graded[:quarter]))
    tail = float(np.sum(graded[-quarter:]))
    decay_ratio = tail / head if head > 0.0 else (0.0 if tail == 0.0 else math.inf)
    if count >= 8 and decay_ratio > 1.0:
        warnings.warn(
            "graded coefficients lambda_k^2 |phi_k|^2 are not decaying; "
            "the data may not represent an element of D(A)",
            DomainMembershipWarning,
            stacklevel=2,
        )
    report = TailReport(
        graded_sum=graded_sum,
        last_coefficient=float(coeffs[-1]),
        decay_ratio=decay_ratio,
    )
    return coeffs, report


def _gauss_panels(a: float, b: float, panels: int, order: int = 12):
    nodes, wts = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * wts[None, :]).ravel()
    return x, w


def _quadrature_coefficients(
    phi: PhiData, model: SpectrumModel, count: int, tol: float, max_panels: int
) -> np.ndarray:
    f = phi.as_callable(model)
    if model.kind == "synthetic":
        raise DomainError("synthetic spectra accept coefficient-form data only")
    panels = max(8, count)
    prev = None
    while panels <= max_panels:
        if model.kind == "dirichlet_1d":
            x, w = _gauss_panels(0.0, model.L, panels)
            fx = np.asarray(f(x), dtype=float)
            basis = np.sqrt(2.0 / model.L) * np.sin(
                np.arange(1, count + 1)[:, None] * math.pi * x[None, :] / model.L
            )
            coeffs = basis @ (w * fx)
        else:
            x, wx = _gauss_panels(0.0, model.L1, panels)
            y, wy = _gauss_panels(0.0, model.L2, panels)
            fx = np.asarray(f(x[:, None], y[None, :]), dtype=float)
            pairs = model.index_pairs(count)
            norm = 2.0 / math.sqrt(model.L1 * model.L2)
            coeffs = np.empty(count)
            for i, (m, n) in enumerate(pairs):
                sx = np.sin(m * math.pi * x / model.L1) * wx
                sy = np.sin(n * math.pi * y / model.L2) * wy
                coeffs[i] = norm * (sx @ fx @ sy)
        if prev is not None:
            scale = max(float(np.max(np.abs(coeffs))), 1.0)
            if float(np.max(np.abs(coeffs - prev))) <= tol * scale:
                return coeffs
        prev = coeffs
        panels *= 2
    raise ConvergenceError(
        f"expansion quadrature did not settle to {tol:g} within {max_panels} panels"
    )


def synthesize(coeffs: Sequence[float], model: SpectrumModel, x, y=None):
    """Superpose coefficients against the model eigenfunctions at a point."""
    coeffs = np.asarray(coeffs, dtype=float)
    total = None
    for i, c in enumerate(coeffs, start=1):
        term = c * eigenfunction(model, i, x, y)
        total = term if total is None else total + term
    if total is None:
        return np.zeros_like(np.asarray(x, dtype=float))
    return total


def graded_norm(coeffs: Sequence[float], eigvals: Sequence[float], s: float = 1.0) -> float:
    """(sum lambda_k^(2s) |c_k|^2)^(1/2); s=1 is the ||A.|| norm, s=0 plain l2."""
    coeffs = np.asarray(coeffs, dtype=float)
    eigvals = np.asarray(eigvals, dtype=float)
    if coeffs.shape != eigvals.shape:
        raise DomainError("coefficients and eigenvalues must have equal length")
    if s < 0.0:
        raise DomainError("s must be >= 0")
    return float(np.sqrt(np.sum(eigvals ** (2.0 * s) * coeffs**2)))


def orthonormality_defect(model: SpectrumModel, count: int, panels: int = 96) -> float:
    """max |(v_j, v_k) - delta_jk| over j, k <= count, by quadrature."""
    if model.kind == "synthetic":
        return 0.0
    if model.kind == "dirichlet_1d":
        x, w = _gauss_panels(0.0, model.L, panels)
        basis = np.sqrt(2.0 / model.L) * np.sin(
            np.arange(1, count + 1)[:, None] * math.pi * x[None, :] / model.L
        )
        gram = (basis * w) @ basis.T
    else:
        x, wx = _gauss_panels(0.0, model.L1, panels)
        y, wy = _gauss_panels(0.0, model.L2, panels)
        pairs = model.index_pairs(count)
        bx = np.array([np.sin(m * math.pi * x / model.L1) for m, _ in pairs])
        by = np.array([np.sin(n * math.pi * y / model.L2) for _, n in pairs])
        norm = 2.0 / math.sqrt(model.L1 * model.L2)
        gx = (bx * wx) @ bx.T
        gy = (by * wy) @ by.T
        gram = norm**2 * gx * gy
    return float(np.max(np.abs(gram - np.eye(count))))
