"""Series solution and verification harness for a non-local problem of a
Boussinesq-type fractional equation with periodic endpoint and integral-mean
data.

Main entry points:

>>> from fracboussinesq import ProblemSpec, SpectrumModel, PhiData, solve
>>> spec = ProblemSpec(alpha=1.5, nu=1.0, T=1.0,
...                    spectrum=SpectrumModel.dirichlet_1d(),
...                    phi=PhiData.from_coefficients({1: 1.0}), K=1)
>>> sol = solve(spec)
"""

from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    DomainError,
    InvalidReportError,
    RefusalError,
)
from .fractional_calculus import CaputoQuery, caputo, ml_primitive, mode_second_derivative
from .solver import (
    ModeSolution,
    ProblemSpec,
    SeriesSolution,
    classical_mode_denominator,
    effective_frequency,
    evaluate,
    evaluate_at,
    evaluate_mode,
    mode_coefficients,
    series_denominator,
    solve,
)
from .special_functions import (
    MLQuery,
    WrightQuery,
    gamma_real,
    mittag_leffler,
    ml,
    ml_oracle,
    pskhu_image_of_power,
    wright,
    wright_series,
)
from .spectral import (
    PhiData,
    SpectrumModel,
    eigenvalues,
    expand,
    graded_norm,
    synthesize,
)
from .verification import (
    VerificationReport,
    classical_zero_scan,
    empirical_c0,
    lemma_bounds_sweep,
    resonance_sweep,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateDenominatorError",
    "DomainError",
    "InvalidReportError",
    "RefusalError",
    "CaputoQuery",
    "caputo",
    "ml_primitive",
    "mode_second_derivative",
    "ModeSolution",
    "ProblemSpec",
    "SeriesSolution",
    "classical_mode_denominator",
    "effective_frequency",
    "evaluate",
    "evaluate_at",
    "evaluate_mode",
    "mode_coefficients",
    "series_denominator",
    "solve",
    "MLQuery",
    "WrightQuery",
    "gamma_real",
    "mittag_leffler",
    "ml",
    "ml_oracle",
    "pskhu_image_of_power",
    "wright",
    "wright_series",
    "PhiData",
    "SpectrumModel",
    "eigenvalues",
    "expand",
    "graded_norm",
    "synthesize",
    "VerificationReport",
    "classical_zero_scan",
    "empirical_c0",
    "lemma_bounds_sweep",
    "resonance_sweep",
    "verify_solution",
    "__version__",
]
