"""Request and response models for the law-checking service."""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field

DocumentKind = Literal["category", "presheaf", "depty", "nat", "term",
                       "base_cwf", "manifest"]


class ViolationModel(BaseModel):
    law: str
    witness: dict[str, Any] = Field(default_factory=dict)


class ValidateRequest(BaseModel):
    kind: DocumentKind
    document: dict[str, Any]
    name: str = ""
    # extra named documents the request may refer to (resolved on top of
    # the bundled fixture registry)
    context: Optional[dict[str, dict[str, Any]]] = None


class ValidateResponse(BaseModel):
    subject: str
    ok: bool
    violations: list[ViolationModel] = Field(default_factory=list)


class SuiteSpecModel(BaseModel):
    name: str
    params: dict[str, Any] = Field(default_factory=dict)


class ReportRequest(BaseModel):
    # inline manifest document; when absent the bundled fixture manifest runs
    manifest: Optional[dict[str, Any]] = None
    suites: Optional[list[Union[str, SuiteSpecModel]]] = None
    seed: Optional[int] = None
    budgets: Optional[dict[str, int]] = None


class CheckModel(BaseModel):
    check_id: str
    anchor: str
    status: Literal["pass", "fail", "skipped"]
    witness: Optional[dict[str, Any]] = None


class SummaryModel(BaseModel):
    total: int
    passed: int
    failed: int
    skipped: int


class ReportResponse(BaseModel):
    v: int = 1
    seed: int
    checks: list[CheckModel]
    summary: SummaryModel


class InternalizeRequest(BaseModel):
    # a bundled base name (e.g. "DVar") or an inline base-CwF document
    base: Union[str, dict[str, Any]]
    suite: str = "all"


class ModalityRequest(BaseModel):
    ctx: Union[str, dict[str, Any]]
    terminal: str
    ty: Optional[Union[str, dict[str, Any]]] = None
    suite: str = "all"


class PiRequest(BaseModel):
    pairs: Optional[list[list[str]]] = None
    manifest: Optional[dict[str, Any]] = None
    budgets: Optional[dict[str, int]] = None


class LawsRequest(BaseModel):
    manifest: Optional[dict[str, Any]] = None
    types: Optional[list[str]] = None
    domains: Optional[list[str]] = None


class FixtureListResponse(BaseModel):
    names: dict[str, list[str]]


class FixtureDocResponse(BaseModel):
    name: str
    kind: str
    document: dict[str, Any]


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str
