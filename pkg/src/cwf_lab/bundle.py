"""Bundled fixture documents.

The fixture registry is shipped as JSON documents plus a manifest wiring
them to the default suite set.  `emit_fixtures` writes the same bytes the
package bundles, so emitted trees diff clean against the shipped ones.
A second manifest carries deliberately broken documents for exercising
the failure paths of the validation suite.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from . import fixtures
from .manifest import (
    Manifest,
    base_cwf_to_doc,
    category_to_doc,
    depty_to_doc,
    manifest_from_doc,
    nat_to_doc,
    presheaf_to_doc,
    term_to_doc,
)

BUNDLED_SUITES = [
    {"name": "validate"},
    {"name": "cwf_laws",
     "params": {"types": ["A2", "A01"],
                "domains": ["T1", "T2", "P3", "G2", "G2.A2", "T1.A01"]}},
    {"name": "pi", "params": {"pairs": [["A01", "B01"], ["A2", "A2p"]]}},
    {"name": "internalize", "params": {"bases": ["D1", "D1pi", "DVar"]}},
    {"name": "modality",
     "params": {"instances": [{"ctx": "G2", "terminal": "b", "ty": "A2"},
                              {"ctx": "T2", "terminal": "b"}]}},
]

_CTX_NAMES = {
    "A2": "G2", "A2p": "G2.A2", "A01": "T1", "B01": "T1.A01",
}
_NAT_ENDPOINTS = {"sigma2": ("T2", "G2")}
_TERM_NAMES = {"M_A2": ("G2", "A2")}
_BASE_CAT_NAMES = {"D1": "C1", "D1pi": "C1"}


def _slug(name: str) -> str:
    return name.lower().replace(".", "_")


def registry_documents() -> dict[str, dict]:
    """All fixture documents, keyed by file name."""
    reg = fixtures.registry()
    docs: dict[str, dict] = {}
    for name, cat in reg["categories"].items():
        docs[f"{_slug(name)}.json"] = category_to_doc(cat)
    base_names = {id(cat): name for name, cat in reg["categories"].items()}
    for name, ps in reg["presheaves"].items():
        ref = next((n for n, c in reg["categories"].items() if c == ps.base), None)
        docs[f"{_slug(name)}.json"] = presheaf_to_doc(ps, base_name=ref)
    for name, A in reg["deptys"].items():
        docs[f"{_slug(name)}.json"] = depty_to_doc(A, _CTX_NAMES[name])
    for name, nt in reg["nats"].items():
        src, dst = _NAT_ENDPOINTS[name]
        docs[f"{_slug(name)}.json"] = nat_to_doc(nt, src, dst)
    for name, M in reg["terms"].items():
        ctx_name, ty_name = _TERM_NAMES[name]
        docs[f"{_slug(name)}.json"] = term_to_doc(M, ctx_name, ty_name)
    for name, B in reg["base_cwfs"].items():
        docs[f"{_slug(name)}.json"] = base_cwf_to_doc(
            B, cat_name=_BASE_CAT_NAMES.get(name))
    return docs


def bundled_manifest_doc() -> dict:
    reg = fixtures.registry()
    doc = {
        "v": 1,
        "seed": 0,
        "budgets": {"pi_fiber_budget": 10_000, "fuel": 64,
                    "max_fiber": 3, "max_objects": 3},
        "categories": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["categories"]},
        "presheaves": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["presheaves"]},
        "deptys": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["deptys"]},
        "nats": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["nats"]},
        "terms": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["terms"]},
        "base_cwfs": {n: {"$ref": f"{_slug(n)}.json"} for n in reg["base_cwfs"]},
        "suites": BUNDLED_SUITES,
    }
    return doc


def mutation_manifest_doc() -> dict:
    """Broken documents that must surface as failed validation checks."""
    bad_cat = category_to_doc(fixtures.c2())
    bad_cat["compose"] = [
        {**row, "result": "id_a"} if (row["g"], row["f"]) == ("f", "id_a") else row
        for row in bad_cat["compose"]
    ]
    good_g2 = presheaf_to_doc(fixtures.gamma2(), base_name="C2")
    bad_ps = json.loads(json.dumps(good_g2))
    for row in bad_ps["action"]:
        if row["mor"] == "id_a" and row["arg"] == "0":
            row["result"] = "1"
    bad_ty = depty_to_doc(fixtures.a2(), "G2m")
    for row in bad_ty["action"]:
        if row["mor"] == "id_a" and row["arg"] == "p":
            row["result"] = "q"
    return {
        "v": 1,
        "seed": 0,
        "categories": {"C2": category_to_doc(fixtures.c2()), "BadCat": bad_cat},
        "presheaves": {"G2m": good_g2, "BadPresheaf": bad_ps},
        "deptys": {"BadType": bad_ty},
        "suites": [{"name": "validate"}],
    }


def emit_fixtures(out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    docs = registry_documents()
    docs["manifest.json"] = bundled_manifest_doc()
    docs["mutations.json"] = mutation_manifest_doc()
    for fname in sorted(docs):
        path = out / fname
        path.write_text(json.dumps(docs[fname], indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def bundled_dir() -> Path:
    return Path(resources.files("cwf_lab")) / "data" / "fixtures"


def bundled_manifest(strict: bool = True) -> Manifest:
    path = bundled_dir() / "manifest.json"
    doc = json.loads(path.read_text())
    return manifest_from_doc(doc, base_dir=path.parent, strict=strict)
