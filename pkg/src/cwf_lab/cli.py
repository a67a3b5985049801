"""Command-line client for the law-checking service.

Every verb marshals its arguments into a request model and dispatches it
either to the in-process handlers (default) or to a running server over
HTTP (``--server``).  Exit codes: 0 all checks passed, 1 at least one
check failed (or a document failed validation), 2 structural or load
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path
from typing import Any, Optional

from .errors import CwfLabError
from .service import handlers
from .service.schemas import (
    InternalizeRequest,
    LawsRequest,
    ModalityRequest,
    PiRequest,
    ReportRequest,
    ValidateRequest,
)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_STRUCTURAL = 2


class Client:
    """Dispatches request models to handlers, locally or over HTTP."""

    def __init__(self, server: Optional[str] = None):
        self.server = server.rstrip("/") if server else None

    def call(self, path: str, request) -> dict[str, Any]:
        if self.server is None:
            local = {
                "/v1/validate": lambda r: handlers.validate_document(r),
                "/v1/report": lambda r: handlers.run_report(r)[1],
                "/v1/laws": lambda r: handlers.run_laws(r)[1],
                "/v1/pi": lambda r: handlers.run_pi(r)[1],
                "/v1/internalize": lambda r: handlers.run_internalize(r)[1],
                "/v1/modality": lambda r: handlers.run_modality(r)[1],
            }
            return local[path](request).model_dump(exclude_none=True)
        body = request.model_dump_json(exclude_none=True).encode()
        req = urllib.request.Request(
            self.server + path, data=body,
            headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as resp:
                return json.loads(resp.read().decode())
        except urllib.error.HTTPError as exc:
            detail = exc.read().decode(errors="replace")
            raise CwfLabError(f"server returned {exc.code}: {detail}") from None
        except urllib.error.URLError as exc:
            raise CwfLabError(f"cannot reach server: {exc.reason}") from None


def _read_doc(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise CwfLabError(f"file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CwfLabError(
            f"parse error in {p.name} at line {exc.lineno} column {exc.colno}")


def _manifest_arg(path: Optional[str]) -> Optional[dict]:
    """Inline a manifest file, resolving its $ref entries relative to it."""
    if path is None:
        return None
    from .manifest import load_manifest  # parse/resolution errors -> exit 2
    load_manifest(path, strict=False)
    doc = _read_doc(path)
    base = Path(path).parent

    def resolve(value):
        if isinstance(value, dict) and "$ref" in value:
            return _read_doc(str(base / value["$ref"]))
        return value

    for section in ("categories", "presheaves", "deptys", "nats", "terms",
                    "base_cwfs"):
        if section in doc:
            doc[section] = {k: resolve(v) for k, v in doc[section].items()}
    return doc


def _emit(doc: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for c in doc.get("checks", []):
            line = f"[{c['status']:>7}] {c['check_id']}  ({c['anchor']})"
            if c.get("witness") and c["status"] != "pass":
                line += "  " + json.dumps(c["witness"], sort_keys=True, default=repr)
            lines.append(line)
        s = doc.get("summary", {})
        lines.append(f"{s.get('passed', 0)}/{s.get('total', 0)} passed, "
                     f"{s.get('failed', 0)} failed, {s.get('skipped', 0)} skipped")
        text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_exit(doc: dict) -> int:
    return EXIT_OK if doc.get("summary", {}).get("failed", 0) == 0 else EXIT_FAILURES


def _budgets(args) -> Optional[dict]:
    budgets = {}
    if getattr(args, "pi_fiber_budget", None) is not None:
        budgets["pi_fiber_budget"] = args.pi_fiber_budget
    if getattr(args, "fuel", None) is not None:
        budgets["fuel"] = args.fuel
    return budgets or None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwf-lab",
        description="Exhaustive law checking for finite presheaf models")
    parser.add_argument("--server", help="base URL of a running service; "
                                         "default runs in-process")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, manifest_positional=True):
        if manifest_positional:
            p.add_argument("manifest", nargs="?",
                           help="manifest file (default: bundled fixtures)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--out", help="write the report to a file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--pi-fiber-budget", type=int, default=None)
        p.add_argument("--fuel", type=int, default=None)

    p_validate = sub.add_parser("validate", help="validate one document")
    p_validate.add_argument("file")
    p_validate.add_argument("--kind", default="manifest",
                            choices=("category", "presheaf", "depty", "nat",
                                     "term", "base_cwf", "manifest"))
    p_validate.add_argument("--name", default="")
    p_validate.add_argument("--format", choices=("json", "text"), default="text")

    p_report = sub.add_parser("report", help="run suites and emit a report")
    common(p_report)
    p_report.add_argument("--suite", action="append", dest="suites",
                          help="suite name (repeatable); default: manifest suites")

    p_laws = sub.add_parser("laws", help="run the comprehension law suite")
    common(p_laws)
    p_laws.add_argument("--types", nargs="*", default=None)
    p_laws.add_argument("--domains", nargs="*", default=None)

    p_pi = sub.add_parser("pi", help="run the function-space suite")
    common(p_pi)
    p_pi.add_argument("--pairs", nargs="*", default=None,
                      help="domain:codomain type-name pairs")

    p_int = sub.add_parser("internalize", help="internalize a base CwF")
    p_int.add_argument("base", help="bundled base name or a document file")
    p_int.add_argument("--suite", default="all")
    p_int.add_argument("--format", choices=("json", "text"), default="text")
    p_int.add_argument("--out")

    p_mod = sub.add_parser("modality", help="run the constant-presheaf suite")
    p_mod.add_argument("ctx", help="bundled presheaf name or a document file")
    p_mod.add_argument("--terminal", required=True)
    p_mod.add_argument("--ty", default=None)
    p_mod.add_argument("--suite", default="all")
    p_mod.add_argument("--format", choices=("json", "text"), default="text")
    p_mod.add_argument("--out")

    p_fix = sub.add_parser("fixtures", help="fixture registry operations")
    fix_sub = p_fix.add_subparsers(dest="fixture_verb", required=True)
    p_emit = fix_sub.add_parser("emit", help="write fixture documents to disk")
    p_emit.add_argument("--out", default="fixtures")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    client = Client(args.server)
    try:
        if args.verb == "validate":
            doc = _read_doc(args.file)
            resp = client.call("/v1/validate", ValidateRequest(
                kind=args.kind, document=doc, name=args.name))
            if args.format == "json":
                sys.stdout.write(json.dumps(resp, indent=2, sort_keys=True) + "\n")
            else:
                status = "ok" if resp["ok"] else "invalid"
                sys.stdout.write(f"{resp['subject']}: {status}\n")
                for v in resp.get("violations", []):
                    sys.stdout.write(
                        f"  {v['law']}: "
                        f"{json.dumps(v.get('witness', {}), sort_keys=True)}\n")
            return EXIT_OK if resp["ok"] else EXIT_FAILURES

        if args.verb == "report":
            resp = client.call("/v1/report", ReportRequest(
                manifest=_manifest_arg(args.manifest), suites=args.suites,
                seed=args.seed, budgets=_budgets(args)))
            _emit(resp, args.format, args.out)
            return _report_exit(resp)

        if args.verb == "laws":
            resp = client.call("/v1/laws", LawsRequest(
                manifest=_manifest_arg(args.manifest),
                types=args.types, domains=args.domains))
            _emit(resp, args.format, args.out)
            return _report_exit(resp)

        if args.verb == "pi":
            pairs = None
            if args.pairs:
                pairs = [p.split(":", 1) for p in args.pairs]
            resp = client.call("/v1/pi", PiRequest(
                manifest=_manifest_arg(args.manifest), pairs=pairs,
                budgets=_budgets(args)))
            _emit(resp, args.format, args.out)
            return _report_exit(resp)

        if args.verb == "internalize":
            base: Any = args.base
            if Path(args.base).exists():
                base = _read_doc(args.base)
            resp = client.call("/v1/internalize", InternalizeRequest(
                base=base, suite=args.suite))
            _emit(resp, args.format, args.out)
            return _report_exit(resp)

        if args.verb == "modality":
            ctx: Any = args.ctx
            if Path(args.ctx).exists():
                ctx = _read_doc(args.ctx)
            ty: Any = args.ty
            if ty and Path(ty).exists():
                ty = _read_doc(ty)
            resp = client.call("/v1/modality", ModalityRequest(
                ctx=ctx, terminal=args.terminal, ty=ty, suite=args.suite))
            _emit(resp, args.format, args.out)
            return _report_exit(resp)

        if args.verb == "fixtures":
            from .bundle import emit_fixtures
            written = emit_fixtures(args.out)
            sys.stdout.write(f"wrote {len(written)} files to {args.out}\n")
            return EXIT_OK

        if args.verb == "serve":
            import uvicorn

            from .service.app import app
            uvicorn.run(app, host=args.host, port=args.port)
            return EXIT_OK
    except CwfLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_STRUCTURAL
    parser.error(f"unknown verb {args.verb!r}")
    return EXIT_STRUCTURAL


if __name__ == "__main__":
    sys.exit(main())
