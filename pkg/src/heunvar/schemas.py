"""Pydantic request/response models for the HTTP service.

Request defaults mirror the CLI defaults so the two front ends describe the
same effective configuration.  Row payloads are JSON-safe copies of the
internal tables (non-finite floats become null).
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from . import __version__


class TruncateRequest(BaseModel):
    s: float | None = None
    gamma: float | None = None
    b: float = 1.0
    n_min: int = Field(default=0, ge=0)
    n_max: int = Field(default=6, ge=0)


class HeunRootsRequest(BaseModel):
    n0: int = Field(default=1, ge=0)
    b: float = 1.0
    d: float = 0.0


class CurvesRequest(BaseModel):
    s: float | None = None
    gamma: float | None = None
    b: float = 1.0
    a_min: float = -5.0
    a_max: float = 5.0
    a_step: float = Field(default=0.05, gt=0)
    nu_max: int = Field(default=6, ge=0)
    basis_size: int = Field(default=25, ge=1)
    drop_tol: float = Field(default=1e-12, gt=0)


class FigureRequest(CurvesRequest):
    n_min: int = Field(default=0, ge=0)
    n_max: int = Field(default=6, ge=0)
    match_tol: float = Field(default=1e-5, gt=0)


class VerifyRequest(BaseModel):
    s: float | None = None
    gamma: float | None = None
    b: float = 1.0
    a_min: float = -5.0
    a_max: float = 5.0
    a_step: float = Field(default=0.05, gt=0)
    nu_max: int = Field(default=6, ge=0)
    basis_size: int = Field(default=25, ge=1)
    drop_tol: float = Field(default=1e-12, gt=0)
    match_tol: float = Field(default=1e-5, gt=0)
    fd_delta: float = Field(default=1e-2, gt=0)
    self_test: bool = False


class TableResponse(BaseModel):
    config: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]


class FigureResponse(BaseModel):
    curves: TableResponse
    points: TableResponse
    metadata: dict[str, Any]


class CheckModel(BaseModel):
    name: str
    measured: float | None
    allowed: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    config: dict[str, Any]
    checks: list[CheckModel]
    all_passed: bool


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str = __version__
