"""HTTP service wrapping the verification engine.

Suites are read-only and exposed as GET; the one-off operations take request
models.  All expression I/O uses the package grammar.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from . import __version__
from .geometry import catalog
from .grammar import ParseError, parse, to_string
from .kernel import KernelError
from .ops import check_vector, derive_conserved, reduce_ansatz
from .reduction import REDUCED_FUNCTIONS
from .suites import SUITES, SuiteContext, run_suite

_EPS = {"+1": (1,), "-1": (-1,), "both": (1, -1)}


class ParseRequest(BaseModel):
    expression: str
    functions: list[str] = Field(default=["V", "W"])


class ParseResponse(BaseModel):
    normalized: str


class CheckRequest(BaseModel):
    vector: str = Field(description="xi_t,xi_x,xi_y (comma-separated expressions)")
    potential: str
    psi: str | None = None
    eta: str | None = None
    eps: str = "both"


class RecordModel(BaseModel):
    id: str
    paper_loc: str
    status: str
    residual: str | None = None
    note: str | None = None


class ReportModel(BaseModel):
    suite: str
    counts: dict[str, int]
    records: list[RecordModel]
    ok: bool


class DeriveRequest(BaseModel):
    vector: str
    potential: str
    eta: str | None = None
    eps: str = "both"


class DeriveResponse(BaseModel):
    u_coeff: str
    gauge: list[str]
    T: list[str]
    divergence_zero: bool


class ReduceRequest(BaseModel):
    ansatz: str
    potential: str


class ReduceResponse(BaseModel):
    shape: str
    reduced_function: str
    arguments: list[str]
    residual: str


class CatalogEntry(BaseModel):
    index: int
    xi_t: str
    xi_x: str
    xi_y: str
    kind: str
    psi: str


def _report_model(rep) -> ReportModel:
    d = rep.to_dict()
    return ReportModel(suite=d["suite"], counts=d["counts"],
                       records=[RecordModel(**r) for r in d["records"]], ok=rep.ok)


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="kgsym", version=__version__,
                  description="Exact symbolic verification of the Klein-Gordon "
                              "symmetry classification on flat 3-space.")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/catalog", response_model=list[CatalogEntry])
    def get_catalog():
        out = []
        for k, (X, cls) in enumerate(catalog(data_dir), start=1):
            out.append(CatalogEntry(index=k, xi_t=to_string(X.xi_t), xi_x=to_string(X.xi_x),
                                    xi_y=to_string(X.xi_y), kind=cls.kind.value,
                                    psi=to_string(cls.psi)))
        return out

    @app.get("/suites")
    def get_suites() -> dict:
        return {"suites": list(SUITES)}

    @app.get("/verify/{suite}", response_model=ReportModel)
    def verify(suite: str, table: str | None = Query(default=None),
               eps: str = Query(default="both")):
        if eps not in _EPS:
            raise HTTPException(422, "eps must be one of +1, -1, both")
        name = f"potentials-{table}" if suite == "potentials" and table else suite
        if name not in SUITES:
            raise HTTPException(404, f"unknown suite {name!r}")
        ctx = SuiteContext(data_dir=data_dir, eps_signs=_EPS[eps])
        return _report_model(run_suite(name, ctx))

    @app.post("/parse", response_model=ParseResponse)
    def parse_expr(req: ParseRequest):
        try:
            e = parse(req.expression, frozenset(req.functions) | REDUCED_FUNCTIONS)
        except ParseError as err:
            raise HTTPException(422, str(err)) from err
        return ParseResponse(normalized=to_string(e))

    @app.post("/check", response_model=ReportModel)
    def check(req: CheckRequest):
        if req.eps not in _EPS:
            raise HTTPException(422, "eps must be one of +1, -1, both")
        try:
            rep = check_vector(req.vector, req.psi, req.potential, req.eta, _EPS[req.eps])
        except (ParseError, KernelError) as err:
            raise HTTPException(422, str(err)) from err
        return _report_model(rep)

    @app.post("/derive/conserved", response_model=DeriveResponse)
    def derive(req: DeriveRequest):
        if req.eps not in _EPS:
            raise HTTPException(422, "eps must be one of +1, -1, both")
        try:
            out = derive_conserved(req.vector, req.potential, req.eta, _EPS[req.eps])
        except (ParseError, KernelError) as err:
            raise HTTPException(422, str(err)) from err
        return DeriveResponse(**out)

    @app.post("/reduce", response_model=ReduceResponse)
    def reduce(req: ReduceRequest):
        try:
            out = reduce_ansatz(req.ansatz, req.potential)
        except (ParseError, KernelError) as err:
            raise HTTPException(422, str(err)) from err
        return ReduceResponse(**out)

    return app


app = create_app()
