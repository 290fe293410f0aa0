"""FastAPI application exposing the twist-analysis pipeline.

Error contract:
  * invalid input (reducible poly, non-square-free q, bad parameters)
    -> 400 {"error": "usage", ...} (pydantic schema violations -> 422);
  * internal tripwires (depth cap, classification conflict, criterion vs
    direct-solver mismatch) -> 500 {"error": "tripwire", "kind": ...};
  * a verification suite that merely *fails* is a normal 200 with
    ``passed: false`` — failing honestly is a result, not an error.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..counting import count_L, euler_cf_truncated, fit_cf
from ..criterion import build_bundle, bundle_to_dict, is_ELS_criterion
from ..errors import TripwireError
from ..localsolve import is_ELS_direct, local_report
from ..quartic import mean_rho, realizable_types
from ..verify import CriterionOracleMismatch, run_suites
from .models import (
    AnalyzeRequest,
    CountRequest,
    CountResponse,
    CountRow,
    ElsRequest,
    ElsResponse,
    FitPointOut,
    FitRequest,
    FitResponse,
    HealthResponse,
    LocalRequest,
    LocalResponse,
    VerifyRequest,
    VerifyResponse,
    WitnessOut,
)


def create_app() -> FastAPI:
    app = FastAPI(title="quartic-twists", version=__version__)

    @app.exception_handler(TripwireError)
    async def tripwire_handler(request: Request, exc: TripwireError):
        return JSONResponse(
            status_code=500,
            content={
                "error": "tripwire",
                "kind": type(exc).__name__,
                "detail": str(exc),
            },
        )

    @app.exception_handler(ValueError)
    async def usage_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={
                "error": "usage",
                "kind": type(exc).__name__,
                "detail": str(exc),
            },
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/analyze")
    def analyze(req: AnalyzeRequest) -> dict:
        """Full criterion bundle plus group-level invariants."""
        f = req.poly.to_quartic()
        bundle = build_bundle(f)
        out = bundle_to_dict(bundle)
        mr = mean_rho(bundle.galois)
        out["mean_rho"] = str(mr)
        out["m"] = str(1 - mr)
        out["realizable_types"] = [list(t) for t in realizable_types(bundle.galois)]
        return out

    @app.post("/local", response_model=LocalResponse)
    def local(req: LocalRequest) -> LocalResponse:
        f = req.poly.to_quartic()
        rep = local_report(f, req.q, req.p)
        wit = None
        if rep.witness is not None:
            wit = WitnessOut(
                kind=rep.witness.kind,
                x0=rep.witness.x0,
                k=rep.witness.k,
                valuation=rep.witness.valuation,
            )
        return LocalResponse(
            solvable=rep.solvable,
            chart=rep.chart,
            depth_used=rep.depth_used,
            witness=wit,
        )

    @app.post("/els", response_model=ElsResponse)
    def els(req: ElsRequest) -> ElsResponse:
        """Everywhere-local solvability by both routes; they must agree."""
        f = req.poly.to_quartic()
        bundle = build_bundle(f)
        got = is_ELS_criterion(bundle, req.q)
        want = is_ELS_direct(f, req.q)
        if got != want:
            raise CriterionOracleMismatch(
                f"f={f}, q={req.q}: criterion says {got}, direct solver says {want}"
            )
        return ElsResponse(q=req.q, els=got, criterion=got, direct=want)

    @app.post("/count", response_model=CountResponse)
    def count(req: CountRequest) -> CountResponse:
        f = req.poly.to_quartic()
        bundle = build_bundle(f)
        rows = count_L(
            bundle,
            req.xmax,
            req.checkpoints,
            workers=req.workers,
            use_cache=req.use_cache,
        )
        return CountResponse(
            galois=bundle.galois.value,
            rows=[CountRow(x=x, count=c) for x, c in rows],
        )

    @app.post("/fit", response_model=FitResponse)
    def fit(req: FitRequest) -> FitResponse:
        f = req.poly.to_quartic()
        bundle = build_bundle(f)
        rows = count_L(
            bundle,
            req.xmax,
            req.checkpoints,
            workers=req.workers,
            use_cache=req.use_cache,
        )
        rep = fit_cf(rows, bundle.galois)
        euler = None
        if req.euler_bound:
            euler = euler_cf_truncated(f, req.euler_bound)
        return FitResponse(
            galois=bundle.galois.value,
            m=str(rep.m),
            m_float=float(rep.m),
            points=[FitPointOut(x=p.x, count=p.count, cx=p.cx) for p in rep.points],
            cf_estimate=rep.cf_estimate,
            trend=rep.trend,
            euler_estimate=euler,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        fs = [p.to_quartic() for p in req.polys] if req.polys else None
        rs = tuple(req.rs) if req.rs is not None else None
        suites = run_suites(
            req.suite,
            fs,
            N=req.N,
            qmax=req.qmax,
            B=req.B,
            rs=rs,
            tolerance=req.tolerance,
            group=req.group,
        )
        dicts = [s.to_dict() for s in suites]
        return VerifyResponse(
            passed=all(d["passed"] for d in dicts),
            suites=dicts,
        )

    return app
