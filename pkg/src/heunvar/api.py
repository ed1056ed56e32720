"""HTTP service exposing the five workflows.

Thin wrapper: each endpoint builds a :class:`~heunvar.workflows.RunConfig`
from the request body, delegates to the corresponding ``run_*`` function and
returns the result as JSON.  Invalid parameter combinations map to 400,
numerical/domain failures to 422; a failed verification is still a 200 with
``all_passed`` false.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import NumericalError, UsageError
from .schemas import (CheckModel, CurvesRequest, FigureRequest,
                      FigureResponse, HealthResponse, HeunRootsRequest,
                      TableResponse, TruncateRequest, VerifyRequest,
                      VerifyResponse)
from .workflows import (RunConfig, jsonable, run_curves, run_figure,
                        run_heun_roots, run_truncate, run_verify)

app = FastAPI(
    title="heunvar",
    version=__version__,
    description="Cross-verification of terminating-series eigenpairs "
                "against variational spectral curves.",
)


@app.exception_handler(UsageError)
async def _usage_error(request: Request, exc: UsageError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(NumericalError)
async def _numerical_error(request: Request, exc: NumericalError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


def _table_response(table) -> TableResponse:
    return TableResponse(**table.to_object())


@app.get("/health", response_model=HealthResponse)
async def health() -> HealthResponse:
    return HealthResponse()


@app.post("/truncate", response_model=TableResponse)
async def truncate(req: TruncateRequest) -> TableResponse:
    cfg = RunConfig(command="truncate", s=req.s, gamma=req.gamma, b=req.b,
                    n_min=req.n_min, n_max=req.n_max).validate()
    return _table_response(run_truncate(cfg))


@app.post("/heun-roots", response_model=TableResponse)
async def heun_roots(req: HeunRootsRequest) -> TableResponse:
    cfg = RunConfig(command="heun-roots", n0=req.n0, b=req.b,
                    d=req.d).validate()
    return _table_response(run_heun_roots(cfg))


@app.post("/curves", response_model=TableResponse)
async def curves(req: CurvesRequest) -> TableResponse:
    cfg = RunConfig(command="curves", s=req.s, gamma=req.gamma, b=req.b,
                    a_min=req.a_min, a_max=req.a_max, a_step=req.a_step,
                    nu_max=req.nu_max, basis_size=req.basis_size,
                    drop_tol=req.drop_tol).validate()
    return _table_response(run_curves(cfg))


@app.post("/figure", response_model=FigureResponse)
async def figure(req: FigureRequest) -> FigureResponse:
    cfg = RunConfig(command="figure", s=req.s, gamma=req.gamma, b=req.b,
                    a_min=req.a_min, a_max=req.a_max, a_step=req.a_step,
                    n_min=req.n_min, n_max=req.n_max, nu_max=req.nu_max,
                    basis_size=req.basis_size, drop_tol=req.drop_tol,
                    match_tol=req.match_tol).validate()
    dataset = run_figure(cfg)
    return FigureResponse(curves=_table_response(dataset.curves),
                          points=_table_response(dataset.points),
                          metadata=jsonable(dataset.metadata))


@app.post("/verify", response_model=VerifyResponse)
async def verify(req: VerifyRequest) -> VerifyResponse:
    cfg = RunConfig(command="verify", s=req.s, gamma=req.gamma, b=req.b,
                    a_min=req.a_min, a_max=req.a_max, a_step=req.a_step,
                    nu_max=req.nu_max, basis_size=req.basis_size,
                    drop_tol=req.drop_tol, match_tol=req.match_tol,
                    fd_delta=req.fd_delta, self_test=req.self_test).validate()
    report = run_verify(cfg)
    checks = [CheckModel(name=c.name,
                         measured=jsonable(c.measured),
                         allowed=c.allowed, passed=c.passed, detail=c.detail)
              for c in report.checks]
    return VerifyResponse(config=jsonable(report.config), checks=checks,
                          all_passed=report.all_passed)
