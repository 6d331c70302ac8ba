"""Pydantic models shared by the CLI configuration loader and the HTTP API."""

from __future__ import annotations

import csv
import math
import os
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .spectral import PhiData, SpectrumModel
from .solver import ProblemSpec


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field path."""


def first_error_message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    path = ".".join(str(p) for p in err["loc"]) or "<root>"
    return f"{path}: {err['msg']}"


class SpectrumConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["synthetic", "dirichlet_1d", "dirichlet_2d"]
    c: float = Field(default=1.0, gt=0)
    p: float = Field(default=2.0, gt=0)
    L: float = Field(default=math.pi, gt=0)
    L1: float = Field(default=math.pi, gt=0)
    L2: float = Field(default=math.pi, gt=0)

    def to_model(self) -> SpectrumModel:
        return SpectrumModel(kind=self.kind, c=self.c, p=self.p, L=self.L, L1=self.L1, L2=self.L2)


class PhiConfig(BaseModel):
    """Data vector: coefficient map, inline samples, or a CSV path (CLI only)."""

    model_config = ConfigDict(extra="forbid")

    coefficients: Optional[dict[int, float]] = None
    csv: Optional[str] = None
    samples_x: Optional[list[float]] = None
    samples_y: Optional[list[float]] = None
    samples_values: Optional[list] = None

    @model_validator(mode="after")
    def _one_form(self) -> "PhiConfig":
        forms = sum(
            1 for f in (self.coefficients, self.csv, self.samples_values) if f is not None
        )
        if forms != 1:
            raise ValueError("provide exactly one of coefficients, csv, samples_values")
        if self.samples_values is not None and self.samples_x is None:
            raise ValueError("inline samples need samples_x")
        if self.coefficients is not None:
            for k in self.coefficients:
                if k < 1:
                    raise ValueError(f"coefficient index {k} must be >= 1")
        return self

    def to_data(self, base_dir: str = ".") -> PhiData:
        if self.coefficients is not None:
            return PhiData.from_coefficients(self.coefficients)
        if self.samples_values is not None:
            if self.samples_y is not None:
                return PhiData.from_samples_2d(
                    self.samples_x, self.samples_y, np.asarray(self.samples_values, dtype=float)
                )
            return PhiData.from_samples_1d(self.samples_x, self.samples_values)
        path = self.csv if os.path.isabs(self.csv) else os.path.join(base_dir, self.csv)
        if not os.path.exists(path):
            raise ConfigError(f"problem.phi.csv: file not found: {path}")
        return _read_phi_csv(path)


def _read_phi_csv(path: str) -> PhiData:
    """(x, value) rows give 1D samples; (x, y, value) rows a 2D tensor grid."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                continue  # header line
    if not rows:
        raise ConfigError(f"problem.phi.csv: no numeric rows in {path}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ConfigError("problem.phi.csv: inconsistent column count")
    data = np.asarray(rows, dtype=float)
    if width == 2:
        return PhiData.from_samples_1d(data[:, 0], data[:, 1])
    if width == 3:
        xs = np.unique(data[:, 0])
        ys = np.unique(data[:, 1])
        if xs.size * ys.size != data.shape[0]:
            raise ConfigError("problem.phi.csv: 2D samples must form a full tensor grid")
        values = np.full((xs.size, ys.size), np.nan)
        xi = {v: i for i, v in enumerate(xs)}
        yi = {v: i for i, v in enumerate(ys)}
        for x, y, v in data:
            values[xi[x], yi[y]] = v
        if np.any(np.isnan(values)):
            raise ConfigError("problem.phi.csv: 2D samples must form a full tensor grid")
        return PhiData.from_samples_2d(xs, ys, values)
    raise ConfigError("problem.phi.csv: expected 2 columns (1D) or 3 columns (2D)")


class ProblemConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(gt=1.0, lt=2.0)
    nu: float = Field(gt=0)
    T: float = Field(gt=0)
    K: int = Field(ge=1)
    tol: float = Field(default=1e-8, gt=0)
    spectrum: SpectrumConfig
    phi: PhiConfig

    def to_spec(self, base_dir: str = ".") -> ProblemSpec:
        return ProblemSpec(
            alpha=self.alpha,
            nu=self.nu,
            T=self.T,
            spectrum=self.spectrum.to_model(),
            phi=self.phi.to_data(base_dir),
            K=self.K,
            tol=self.tol,
        )


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    solution_json: str = "solution.json"
    series_csv: str = "series.csv"
    report_json: str = "report.json"
    report_txt: str = "report.txt"
    resonance_csv: str = "resonance.csv"


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    time_points: int = Field(default=101, ge=2)
    interior_points: int = Field(default=9, ge=1)
    alpha_grid: Optional[list[float]] = Field(default=None, min_length=1)
    sweep_min: float = Field(default=1e-3, gt=0)
    sweep_max: float = Field(default=1e6, gt=0)
    sweep_points: int = Field(default=49, ge=2)

    @model_validator(mode="after")
    def _ordered(self) -> "GridConfig":
        if self.sweep_min >= self.sweep_max:
            raise ValueError("sweep_min must be < sweep_max")
        if self.alpha_grid is not None:
            for a in self.alpha_grid:
                if not (1.0 < a < 2.0):
                    raise ValueError(f"alpha grid entry {a} outside (1, 2)")
        return self


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemConfig
    output: OutputConfig = OutputConfig()
    grid: GridConfig = GridConfig()
    seed: int = 0


def load_run_config(path: str) -> tuple[RunConfig, str]:
    """Parse and validate a JSON run configuration.

    Raises ConfigError naming the first offending field path; output paths
    must be resolvable (parent directories exist) at load time.
    """
    import json

    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    try:
        cfg = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(first_error_message(exc)) from exc
    base_dir = os.path.dirname(os.path.abspath(path))
    for name in ("solution_json", "series_csv", "report_json", "report_txt", "resonance_csv"):
        out = getattr(cfg.output, name)
        target = out if os.path.isabs(out) else os.path.join(base_dir, out)
        parent = os.path.dirname(target) or "."
        if not os.path.isdir(parent):
            raise ConfigError(f"output.{name}: directory does not exist: {parent}")
    if cfg.problem.phi.csv is not None:
        csv_path = cfg.problem.phi.csv
        target = csv_path if os.path.isabs(csv_path) else os.path.join(base_dir, csv_path)
        if not os.path.exists(target):
            raise ConfigError(f"problem.phi.csv: file not found: {target}")
    return cfg, base_dir


# ---------------------------------------------------------------------------
# HTTP request/response bodies


class MLRequest(BaseModel):
    rho: float = Field(gt=0, le=2)
    mu: float = Field(gt=0)
    z: float = Field(le=0)
    oracle_digits: Optional[int] = Field(default=None, ge=50)


class MLResponse(BaseModel):
    value: float
    oracle_value: Optional[str] = None
    oracle_error_bound: Optional[str] = None
    relative_difference: Optional[float] = None


class ModeDTO(BaseModel):
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


class SolveRequest(BaseModel):
    problem: ProblemConfig
    time_points: int = Field(default=101, ge=2)


class SeriesDTO(BaseModel):
    t: list[float]
    coefficients: list[list[float]]  # row i holds (T_1 .. T_K) at t[i]


class SolveResponse(BaseModel):
    alpha: float
    nu: float
    T: float
    K: int
    tail_bound: float
    max_abs_u: float
    modes: list[ModeDTO]
    series: SeriesDTO


class CheckDTO(BaseModel):
    name: str
    parameters: dict
    value: float
    tolerance: float
    passed: bool


class VerifyRequest(BaseModel):
    problem: ProblemConfig
    interior_points: int = Field(default=9, ge=1)
    alpha_grid: Optional[list[float]] = None
    sweep_points: int = Field(default=49, ge=2)


class VerifyResponse(BaseModel):
    all_passed: bool
    checks: list[CheckDTO]
    empirical_c0: dict
    notes: dict


class ResonanceRequest(BaseModel):
    nu: float = Field(gt=0)
    T: float = Field(gt=0)
    alphas: list[float] = Field(default=[1.5, 1.9, 1.99, 1.999], min_length=1)
    points: int = Field(ge=1, default=32)


class ResonanceRow(BaseModel):
    alpha: float
    x: float
    D: float


class ResonanceResponse(BaseModel):
    rows: list[ResonanceRow]
    notes: dict


class BoundsRequest(BaseModel):
    alphas: list[float] = Field(default=[1.1, 1.3, 1.5, 1.7, 1.9], min_length=1)
    t_min: float = Field(default=1e-3, gt=0)
    t_max: float = Field(default=1e6, gt=0)
    points: int = Field(default=49, ge=2)


class BoundsResponse(BaseModel):
    all_passed: bool
    checks: list[CheckDTO]
    empirical_c0: dict
