"""Service-layer handlers: the single place requests are interpreted.

Both the HTTP routes and the command-line client call these functions;
they accept and return the pydantic models from `schemas`.
"""

from __future__ import annotations

import json
from typing import Any

from .. import bundle
from ..cwf import validate_depty, validate_term
from ..errors import StructuralError
from ..fincat import validate_category
from ..manifest import (
    Manifest,
    SuiteSpec,
    base_cwf_from_doc,
    category_from_doc,
    depty_from_doc,
    manifest_from_doc,
    nat_from_doc,
    presheaf_from_doc,
    term_from_doc,
)
from ..presheaf import validate_nat, validate_presheaf
from ..suites import Report, run_suites
from .schemas import (
    CheckModel,
    FixtureDocResponse,
    FixtureListResponse,
    InternalizeRequest,
    LawsRequest,
    ModalityRequest,
    PiRequest,
    ReportRequest,
    ReportResponse,
    SuiteSpecModel,
    SummaryModel,
    ValidateRequest,
    ValidateResponse,
    ViolationModel,
)

_KIND_SECTION = {
    "category": "categories",
    "presheaf": "presheaves",
    "depty": "deptys",
    "nat": "nats",
    "term": "terms",
    "base_cwf": "base_cwfs",
}


def _registry_docs() -> dict[str, dict[str, Any]]:
    docs = bundle.registry_documents()
    manifest_doc = bundle.bundled_manifest_doc()
    sections: dict[str, dict[str, Any]] = {}
    for section in ("categories", "presheaves", "deptys", "nats", "terms",
                    "base_cwfs"):
        sections[section] = {}
        for name, ref in manifest_doc[section].items():
            sections[section][name] = docs[ref["$ref"]]
    return sections


def validate_document(req: ValidateRequest) -> ValidateResponse:
    subject = f"{req.kind}:{req.name or '<inline>'}"
    if req.kind == "manifest":
        m = manifest_from_doc(req.document, base_dir=None, strict=False)
        rep = m.load_report
        return ValidateResponse(
            subject=subject, ok=rep.ok,
            violations=[ViolationModel(law=v.law, witness=v.witness)
                        for v in rep.violations])

    pool = _registry_docs()
    for section, named in (req.context or {}).items():
        if section not in pool:
            raise StructuralError(f"unknown context section {section!r}")
        pool[section].update(named)

    cats = {n: category_from_doc(d, n) for n, d in pool["categories"].items()}
    presheaves = {n: presheaf_from_doc(d, cats, n)
                  for n, d in pool["presheaves"].items()}

    if req.kind == "category":
        obj = category_from_doc(req.document, req.name)
        rep = validate_category(obj)
    elif req.kind == "presheaf":
        obj = presheaf_from_doc(req.document, cats, req.name)
        rep = validate_presheaf(obj)
    elif req.kind == "depty":
        obj = depty_from_doc(req.document, presheaves, req.name)
        rep = validate_depty(obj)
    elif req.kind == "nat":
        obj = nat_from_doc(req.document, presheaves, req.name)
        rep = validate_nat(obj)
    elif req.kind == "term":
        deptys = {n: depty_from_doc(d, presheaves, n)
                  for n, d in pool["deptys"].items()}
        obj = term_from_doc(req.document, presheaves, deptys, req.name)
        rep = validate_term(obj)
    elif req.kind == "base_cwf":
        from ..internal import validate_base_cwf
        obj = base_cwf_from_doc(req.document, cats, req.name)
        rep = validate_base_cwf(obj)
    else:
        raise StructuralError(f"unknown document kind {req.kind!r}")
    return ValidateResponse(
        subject=subject, ok=rep.ok,
        violations=[ViolationModel(law=v.law, witness=_jsonable(v.witness))
                    for v in rep.violations])


def _jsonable(witness: dict) -> dict:
    return json.loads(json.dumps(witness, default=repr))


def _prepare_manifest(req: ReportRequest) -> Manifest:
    if req.manifest is not None:
        m = manifest_from_doc(req.manifest, base_dir=None, strict=False)
    else:
        m = bundle.bundled_manifest(strict=False)
    if req.suites is not None:
        specs = []
        for s in req.suites:
            if isinstance(s, str):
                specs.append(SuiteSpec(s))
            elif isinstance(s, SuiteSpecModel):
                specs.append(SuiteSpec(s.name, dict(s.params)))
            else:
                specs.append(SuiteSpec(s["name"], dict(s.get("params", {}))))
        m.suites = specs
    if req.seed is not None:
        m.seed = req.seed
    if req.budgets:
        m.budgets.update(req.budgets)
    return m


def report_to_response(report: Report) -> ReportResponse:
    doc = report.to_doc()
    return ReportResponse(
        v=doc["v"], seed=doc["seed"],
        checks=[CheckModel(**{**c, "witness": _jsonable(c["witness"])
                              if c.get("witness") else None})
                for c in doc["checks"]],
        summary=SummaryModel(**doc["summary"]),
    )


def run_report(req: ReportRequest) -> tuple[Report, ReportResponse]:
    m = _prepare_manifest(req)
    report = run_suites(m)
    return report, report_to_response(report)


def run_laws(req: LawsRequest) -> tuple[Report, ReportResponse]:
    params: dict[str, Any] = {}
    if req.types:
        params["types"] = req.types
    if req.domains:
        params["domains"] = req.domains
    return run_report(ReportRequest(
        manifest=req.manifest,
        suites=[SuiteSpecModel(name="cwf_laws", params=params)]))


def run_pi(req: PiRequest) -> tuple[Report, ReportResponse]:
    params: dict[str, Any] = {}
    if req.pairs:
        params["pairs"] = req.pairs
    else:
        params["pairs"] = [["A01", "B01"], ["A2", "A2p"]]
    return run_report(ReportRequest(
        manifest=req.manifest, budgets=req.budgets,
        suites=[SuiteSpecModel(name="pi", params=params)]))


def run_internalize(req: InternalizeRequest) -> tuple[Report, ReportResponse]:
    if isinstance(req.base, str):
        pool = _registry_docs()
        if req.base not in pool["base_cwfs"]:
            raise StructuralError(f"unknown bundled base {req.base!r}")
        manifest_doc = {
            "v": 1,
            "categories": pool["categories"],
            "base_cwfs": {req.base: pool["base_cwfs"][req.base]},
            "suites": [],
        }
        name = req.base
    else:
        manifest_doc = {"v": 1, "base_cwfs": {"base": req.base}, "suites": []}
        name = "base"
    suites: list[Any] = [SuiteSpecModel(name="internalize",
                                        params={"bases": [name]})]
    if req.suite == "all":
        suites.insert(0, SuiteSpecModel(name="validate"))
    return run_report(ReportRequest(manifest=manifest_doc, suites=suites))


def run_modality(req: ModalityRequest) -> tuple[Report, ReportResponse]:
    pool = _registry_docs()
    manifest_doc: dict[str, Any] = {"v": 1, "categories": pool["categories"],
                                    "presheaves": {}, "deptys": {}, "suites": []}
    if isinstance(req.ctx, str):
        if req.ctx not in pool["presheaves"]:
            raise StructuralError(f"unknown bundled presheaf {req.ctx!r}")
        ctx_name = req.ctx
        manifest_doc["presheaves"][ctx_name] = pool["presheaves"][ctx_name]
    else:
        ctx_name = "ctx"
        manifest_doc["presheaves"][ctx_name] = req.ctx
    instance: dict[str, Any] = {"ctx": ctx_name, "terminal": req.terminal}
    if req.ty is not None:
        if isinstance(req.ty, str):
            if req.ty not in pool["deptys"]:
                raise StructuralError(f"unknown bundled type {req.ty!r}")
            ty_name = req.ty
            manifest_doc["deptys"][ty_name] = pool["deptys"][ty_name]
            # its context must ride along
            ctx_ref = pool["deptys"][ty_name]["ctx"]
            manifest_doc["presheaves"].setdefault(ctx_ref,
                                                  pool["presheaves"][ctx_ref])
        else:
            ty_name = "ty"
            manifest_doc["deptys"][ty_name] = req.ty
        instance["ty"] = ty_name
    suites: list[Any] = [SuiteSpecModel(name="modality",
                                        params={"instances": [instance]})]
    if req.suite == "all":
        suites.insert(0, SuiteSpecModel(name="validate"))
    return run_report(ReportRequest(manifest=manifest_doc, suites=suites))


def list_fixtures() -> FixtureListResponse:
    pool = _registry_docs()
    return FixtureListResponse(
        names={section: sorted(named) for section, named in pool.items()})


def fixture_doc(name: str) -> FixtureDocResponse:
    pool = _registry_docs()
    for section, named in pool.items():
        if name in named:
            kind = {v: k for k, v in _KIND_SECTION.items()}[section]
            return FixtureDocResponse(name=name, kind=kind, document=named[name])
    raise StructuralError(f"unknown fixture {name!r}")
