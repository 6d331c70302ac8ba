"""HTTP facade over the solver and verification suite."""

from __future__ import annotations

import mpmath as mp
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from . import __version__
from .errors import (
    ConvergenceError,
    DegenerateDenominatorError,
    DomainError,
    InvalidReportError,
    RefusalError,
)
from .runner import run_bounds, run_resonance, run_solve, run_verify
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    CheckDTO,
    MLRequest,
    MLResponse,
    ModeDTO,
    ResonanceRequest,
    ResonanceResponse,
    ResonanceRow,
    SeriesDTO,
    SolveRequest,
    SolveResponse,
    VerifyRequest,
    VerifyResponse,
)
from .special_functions import MLQuery, mittag_leffler, ml_oracle


def create_app() -> FastAPI:
    app = FastAPI(
        title="fracboussinesq",
        version=__version__,
        description=(
            "Mode-series solver for a non-local problem of a Boussinesq-type "
            "fractional equation, with its verification suite"
        ),
    )

    @app.exception_handler(DomainError)
    async def _domain(_, exc: DomainError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/ml", response_model=MLResponse)
    def ml_endpoint(req: MLRequest) -> MLResponse:
        try:
            value = mittag_leffler(req.rho, req.mu, req.z)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if req.oracle_digits is None:
            return MLResponse(value=value)
        try:
            oracle = ml_oracle(
                MLQuery(req.rho, req.mu, req.z), significant_digits=req.oracle_digits
            )
        except RefusalError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        rel = float(abs(mp.mpf(value) - oracle.value) / (abs(oracle.value) + mp.mpf("1e-300")))
        return MLResponse(
            value=value,
            oracle_value=mp.nstr(oracle.value, req.oracle_digits),
            oracle_error_bound=mp.nstr(oracle.error_bound, 5),
            relative_difference=rel,
        )

    @app.post("/solve", response_model=SolveResponse)
    def solve_endpoint(req: SolveRequest) -> SolveResponse:
        try:
            spec = req.problem.to_spec()
            sol, times, series, max_abs_u = run_solve(spec, req.time_points)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (ConvergenceError, DegenerateDenominatorError, ArithmeticError) as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return SolveResponse(
            alpha=spec.alpha,
            nu=spec.nu,
            T=spec.T,
            K=spec.K,
            tail_bound=sol.tail_bound,
            max_abs_u=max_abs_u,
            modes=[ModeDTO(**_mode_dict(m)) for m in sol.modes],
            series=SeriesDTO(t=[float(t) for t in times], coefficients=series.tolist()),
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
        try:
            spec = req.problem.to_spec()
            report = run_verify(
                spec,
                interior_points=req.interior_points,
                alpha_grid=req.alpha_grid,
                sweep_points=req.sweep_points,
            )
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (ConvergenceError, InvalidReportError, ArithmeticError) as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return VerifyResponse(
            all_passed=report.all_passed,
            checks=[CheckDTO(**c.to_dict()) for c in report.checks],
            empirical_c0=report.empirical_c0,
            notes=report.notes,
        )

    @app.post("/resonance", response_model=ResonanceResponse)
    def resonance_endpoint(req: ResonanceRequest) -> ResonanceResponse:
        try:
            report = run_resonance(req.nu, req.T, req.alphas, req.points)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return ResonanceResponse(
            rows=[ResonanceRow(**row) for row in report.resonance_table],
            notes=report.notes,
        )

    @app.post("/bounds", response_model=BoundsResponse)
    def bounds_endpoint(req: BoundsRequest) -> BoundsResponse:
        try:
            report = run_bounds(req.alphas, req.t_min, req.t_max, req.points)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return BoundsResponse(
            all_passed=report.all_passed,
            checks=[CheckDTO(**c.to_dict()) for c in report.checks],
            empirical_c0=report.empirical_c0,
        )

    return app


def _mode_dict(m) -> dict:
    return {
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


app = create_app()
