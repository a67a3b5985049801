"""HTTP surface: FastAPI routes over the service handlers."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import CapacityError, CwfLabError, InvalidStructureError, StructuralError
from . import handlers
from .schemas import (
    FixtureDocResponse,
    FixtureListResponse,
    HealthResponse,
    InternalizeRequest,
    LawsRequest,
    ModalityRequest,
    PiRequest,
    ReportRequest,
    ReportResponse,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(title="cwf-lab", version=__version__,
              description="Law-checking service for finite presheaf models "
                          "of dependent type structure")


def _guard(fn, *args):
    try:
        return fn(*args)
    except (StructuralError, InvalidStructureError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except CapacityError as exc:
        raise HTTPException(status_code=413, detail=str(exc)) from None
    except CwfLabError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(version=__version__)


@app.post("/v1/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest) -> ValidateResponse:
    return _guard(handlers.validate_document, req)


@app.post("/v1/report", response_model=ReportResponse)
def report(req: ReportRequest) -> ReportResponse:
    return _guard(lambda r: handlers.run_report(r)[1], req)


@app.post("/v1/laws", response_model=ReportResponse)
def laws(req: LawsRequest) -> ReportResponse:
    return _guard(lambda r: handlers.run_laws(r)[1], req)


@app.post("/v1/pi", response_model=ReportResponse)
def pi(req: PiRequest) -> ReportResponse:
    return _guard(lambda r: handlers.run_pi(r)[1], req)


@app.post("/v1/internalize", response_model=ReportResponse)
def internalize(req: InternalizeRequest) -> ReportResponse:
    return _guard(lambda r: handlers.run_internalize(r)[1], req)


@app.post("/v1/modality", response_model=ReportResponse)
def modality(req: ModalityRequest) -> ReportResponse:
    return _guard(lambda r: handlers.run_modality(r)[1], req)


@app.get("/v1/fixtures", response_model=FixtureListResponse)
def fixtures_list() -> FixtureListResponse:
    return _guard(handlers.list_fixtures)


@app.get("/v1/fixtures/{name}", response_model=FixtureDocResponse)
def fixture(name: str) -> FixtureDocResponse:
    return _guard(handlers.fixture_doc, name)
