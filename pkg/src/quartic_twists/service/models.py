"""Pydantic request/response schemas for the twist-analysis service."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..quartic import Quartic


class PolyIn(BaseModel):
    """Monic integer quartic x^4 + a3 x^3 + a2 x^2 + a1 x + a0."""

    a3: int = 0
    a2: int = 0
    a1: int = 0
    a0: int = 0

    def to_quartic(self) -> Quartic:
        return Quartic(self.a3, self.a2, self.a1, self.a0)


class AnalyzeRequest(BaseModel):
    poly: PolyIn


class LocalRequest(BaseModel):
    poly: PolyIn
    q: int
    p: int = Field(ge=2, description="prime of the completion")


class ElsRequest(BaseModel):
    poly: PolyIn
    q: int = Field(ge=1)


class CountRequest(BaseModel):
    poly: PolyIn
    xmax: int = Field(ge=1, le=10**9)
    checkpoints: Optional[list[int]] = None
    workers: int = Field(default=1, ge=1, le=64)
    use_cache: bool = True


class FitRequest(CountRequest):
    euler_bound: int = Field(default=0, ge=0, le=10**9)


class VerifyRequest(BaseModel):
    suite: Literal["filtration", "terms", "zeta", "density", "oracle", "all"]
    polys: Optional[list[PolyIn]] = None
    N: int = Field(default=10**5, ge=10, le=10**7)
    qmax: int = Field(default=2000, ge=1, le=10**6)
    B: int = Field(default=10**6, ge=10, le=10**8)
    rs: Optional[list[int]] = None
    tolerance: float = Field(default=0.01, gt=0)
    group: Optional[Literal["V4", "C4", "D4", "A4", "S4"]] = None


class HealthResponse(BaseModel):
    status: str
    version: str


class WitnessOut(BaseModel):
    kind: str
    x0: int
    k: int
    valuation: Optional[int] = None


class LocalResponse(BaseModel):
    solvable: bool
    chart: Optional[str] = None
    depth_used: int
    witness: Optional[WitnessOut] = None


class ElsResponse(BaseModel):
    q: int
    els: bool
    criterion: bool
    direct: bool


class CountRow(BaseModel):
    x: int
    count: int


class FitPointOut(CountRow):
    cx: float


class CountResponse(BaseModel):
    galois: str
    rows: list[CountRow]


class FitResponse(BaseModel):
    galois: str
    m: str  # exact fraction, e.g. "3/8"
    m_float: float
    points: list[FitPointOut]
    cf_estimate: float
    trend: Optional[float] = None
    euler_estimate: Optional[float] = None


class CheckOut(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class SuiteOut(BaseModel):
    suite: str
    passed: bool
    checks: list[CheckOut]


class VerifyResponse(BaseModel):
    passed: bool
    suites: list[SuiteOut]
