"""Document formats and manifest loading.

Every value the engine works with has a JSON document form.  A manifest
names a collection of documents (inline or by ``{"$ref": path}``), the
suites to run over them, and budgets.  Loading resolves all references,
rebuilds the object graph, and runs every module validator; violations
are aggregated into a load report, which strict loading raises on and
the suite runner converts into failed checks.

Composite map keys use ``obj|elem`` strings, with structured elements
JSON-encoded after the bar; object names therefore must not contain a
bar character.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .cwf import DepTy, Term, validate_depty, validate_term
from .elems import Elem, elem_from_doc, elem_to_doc
from .errors import StructuralError
from .fincat import FinCat, Mor, validate_category
from .internal import BaseCwF, PiTables, validate_base_cwf
from .presheaf import NatTrans, Presheaf, validate_nat, validate_presheaf
from .report import ValidationReport

SCHEMA_VERSION = 1

DEFAULT_BUDGETS = {
    "pi_fiber_budget": 10_000,
    "fuel": 64,
    "max_fiber": 3,
    "max_objects": 3,
}


# --- element and key helpers ---

def elem_key_str(s: Elem) -> str:
    if isinstance(s, str):
        return s
    return json.dumps(elem_to_doc(s), separators=(",", ":"), sort_keys=True)


def point_key(d: str, s: Elem) -> str:
    return f"{d}|{elem_key_str(s)}"


def parse_point_key(key: str, carrier_of) -> tuple[str, Elem]:
    """Split an ``obj|elem`` key and resolve the element against the known
    carrier at that object."""
    if "|" not in key:
        raise StructuralError(f"malformed point key {key!r}")
    d, rest = key.split("|", 1)
    pool = carrier_of(d)
    for e in pool:
        if isinstance(e, str) and e == rest:
            return d, e
    try:
        decoded = elem_from_doc(json.loads(rest))
    except (json.JSONDecodeError, StructuralError):
        decoded = None
    if decoded is not None and decoded in pool:
        return d, decoded
    raise StructuralError(f"point key {key!r} does not name a carrier element")


def _resolve(doc: Any, pool, where: str) -> Elem:
    decoded = elem_from_doc(doc)
    if decoded in pool:
        return decoded
    raise StructuralError(f"{where}: {doc!r} is not a known element")


# --- category documents ---

def category_to_doc(cat: FinCat) -> dict:
    return {
        "objects": list(cat.objects),
        "morphisms": [{"id": m.name, "dom": m.dom, "cod": m.cod}
                      for m in (cat.morphisms[k] for k in sorted(cat.morphisms))],
        "identity": dict(sorted(cat.identity.items())),
        "compose": [{"g": g, "f": f, "result": r}
                    for (g, f), r in sorted(cat.composition.items())],
    }


def category_from_doc(doc: dict, name: str = "") -> FinCat:
    try:
        objects = tuple(doc["objects"])
        morphisms = {m["id"]: Mor(m["id"], m["dom"], m["cod"])
                     for m in doc["morphisms"]}
        identity = dict(doc["identity"])
        composition = {(e["g"], e["f"]): e["result"] for e in doc["compose"]}
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed category document: {exc}") from None
    return FinCat(objects, morphisms, identity, composition, name=name)


# --- presheaf documents ---

def presheaf_to_doc(ps: Presheaf, base_name: Optional[str] = None) -> dict:
    return {
        "base": base_name if base_name is not None else category_to_doc(ps.base),
        "carrier": {d: [elem_to_doc(e) for e in ps.carrier[d]]
                    for d in sorted(ps.carrier)},
        "action": [{"mor": mor, "arg": elem_to_doc(arg), "result": elem_to_doc(res)}
                   for (mor, arg), res in sorted(ps.action.items(),
                                                 key=lambda kv: repr(kv))],
    }


def presheaf_from_doc(doc: dict, bases: dict[str, FinCat], name: str = "") -> Presheaf:
    base_ref = doc.get("base")
    if isinstance(base_ref, str):
        if base_ref not in bases:
            raise StructuralError(f"presheaf {name!r}: unknown category {base_ref!r}")
        base = bases[base_ref]
    elif isinstance(base_ref, dict):
        base = category_from_doc(base_ref, name=f"{name}.base")
    else:
        raise StructuralError(f"presheaf {name!r}: missing base")
    try:
        carrier = {d: tuple(elem_from_doc(e) for e in elems)
                   for d, elems in doc["carrier"].items()}
        action = {}
        for row in doc["action"]:
            mor = row["mor"]
            m = base.mor(mor)
            arg = _resolve(row["arg"], carrier.get(m.cod, ()), f"action arg of {name!r}")
            res = _resolve(row["result"], carrier.get(m.dom, ()),
                           f"action result of {name!r}")
            action[(mor, arg)] = res
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed presheaf document {name!r}: {exc}") from None
    return Presheaf(base, carrier, action, name=name)


# --- natural transformation documents ---

def nat_to_doc(nt: NatTrans, src_name: str, dst_name: str) -> dict:
    return {
        "src": src_name,
        "dst": dst_name,
        "components": {
            d: {elem_key_str(s): elem_to_doc(v)
                for s, v in sorted(comp.items(), key=lambda kv: repr(kv))}
            for d, comp in sorted(nt.components.items())
        },
    }


def nat_from_doc(doc: dict, presheaves: dict[str, Presheaf], name: str = "") -> NatTrans:
    try:
        src, dst = presheaves[doc["src"]], presheaves[doc["dst"]]
    except KeyError as exc:
        raise StructuralError(f"transformation {name!r}: unknown presheaf {exc}") from None
    components: dict[str, dict[Elem, Elem]] = {}
    for d, comp in doc.get("components", {}).items():
        table: dict[Elem, Elem] = {}
        for key, value in comp.items():
            _, s = parse_point_key(f"{d}|{key}", lambda obj: src.carrier.get(obj, ()))
            table[s] = _resolve(value, dst.carrier.get(d, ()),
                                f"component value of {name!r}")
        components[d] = table
    return NatTrans(src, dst, components, name=name)


# --- semantic type and term documents ---

def depty_to_doc(A: DepTy, ctx_name: str) -> dict:
    ctx = A.ctx
    action_rows = []
    for (mor, s2, arg), res in sorted(A.action.items(), key=lambda kv: repr(kv)):
        m = ctx.base.morphisms[mor]
        action_rows.append({
            "mor": mor,
            "src_s": elem_to_doc(ctx.act(mor, s2)),
            "dst_s": elem_to_doc(s2),
            "arg": elem_to_doc(arg),
            "result": elem_to_doc(res),
        })
    return {
        "ctx": ctx_name,
        "fiber": {point_key(d, s): [elem_to_doc(e) for e in A.fiber[(d, s)]]
                  for d, s in sorted(A.fiber, key=repr)},
        "action": action_rows,
    }


def depty_from_doc(doc: dict, presheaves: dict[str, Presheaf], name: str = "") -> DepTy:
    ctx_name = doc.get("ctx")
    if ctx_name not in presheaves:
        raise StructuralError(f"type {name!r}: unknown context {ctx_name!r}")
    ctx = presheaves[ctx_name]
    fiber: dict[tuple[str, Elem], tuple[Elem, ...]] = {}
    for key, elems in doc.get("fiber", {}).items():
        d, s = parse_point_key(key, lambda obj: ctx.carrier.get(obj, ()))
        fiber[(d, s)] = tuple(elem_from_doc(e) for e in elems)
    action: dict[tuple[str, Elem, Elem], Elem] = {}
    for row in doc.get("action", []):
        mor = row["mor"]
        m = ctx.base.mor(mor)
        dst_s = _resolve(row["dst_s"], ctx.carrier.get(m.cod, ()),
                         f"type action of {name!r}")
        src_s = ctx.act(mor, dst_s)
        if "src_s" in row and _resolve(row["src_s"], ctx.carrier.get(m.dom, ()),
                                       f"type action of {name!r}") != src_s:
            raise StructuralError(
                f"type {name!r}: action row source does not match the restriction")
        arg = _resolve(row["arg"], fiber.get((m.cod, dst_s), ()),
                       f"type action arg of {name!r}")
        res = _resolve(row["result"], fiber.get((m.dom, src_s), ()),
                       f"type action result of {name!r}")
        action[(mor, dst_s, arg)] = res
    return DepTy(ctx, fiber, action, name=name)


def term_to_doc(M: Term, ctx_name: str, ty_name: str) -> dict:
    return {
        "ctx": ctx_name,
        "ty": ty_name,
        "assign": {point_key(d, s): elem_to_doc(v)
                   for (d, s), v in sorted(M.assign.items(), key=repr)},
    }


def term_from_doc(doc: dict, presheaves: dict[str, Presheaf],
                  deptys: dict[str, DepTy], name: str = "") -> Term:
    ctx_name, ty_name = doc.get("ctx"), doc.get("ty")
    if ctx_name not in presheaves:
        raise StructuralError(f"term {name!r}: unknown context {ctx_name!r}")
    if ty_name not in deptys:
        raise StructuralError(f"term {name!r}: unknown type {ty_name!r}")
    ctx, ty = presheaves[ctx_name], deptys[ty_name]
    assign: dict[tuple[str, Elem], Elem] = {}
    for key, value in doc.get("assign", {}).items():
        d, s = parse_point_key(key, lambda obj: ctx.carrier.get(obj, ()))
        assign[(d, s)] = _resolve(value, ty.fiber.get((d, s), ()),
                                  f"assignment of {name!r}")
    return Term(ctx, ty, assign, name=name)


# --- base CwF documents ---

def base_cwf_to_doc(B: BaseCwF, cat_name: Optional[str] = None) -> dict:
    doc = {
        "cat": cat_name if cat_name is not None else category_to_doc(B.cat),
        "terminal": B.terminal,
        "bang": dict(sorted(B.bang.items())),
        "ty": {obj: list(tys) for obj, tys in sorted(B.ty.items())},
        "ty_subst": [{"ty": t, "mor": m, "result": r}
                     for (t, m), r in sorted(B.ty_subst.items())],
        "tm": [{"obj": obj, "ty": t, "terms": list(ts)}
               for (obj, t), ts in sorted(B.tm.items())],
        "tm_subst": [{"tm": t, "mor": m, "result": r}
                     for (t, m), r in sorted(B.tm_subst.items())],
        "compr": [{"obj": o, "ty": t, "result": r}
                  for (o, t), r in sorted(B.compr.items())],
        "p": [{"obj": o, "ty": t, "result": r} for (o, t), r in sorted(B.p.items())],
        "v": [{"obj": o, "ty": t, "result": r} for (o, t), r in sorted(B.v.items())],
        "ext": [{"mor": m, "ty": t, "tm": tm, "result": r}
                for (m, t, tm), r in sorted(B.ext.items())],
    }
    if B.pi is not None:
        doc["pi"] = {
            "pi_ty": [{"dom": a, "cod": b, "result": r}
                      for (a, b), r in sorted(B.pi.pi_ty.items())],
            "lam": [{"dom": a, "cod": b, "tm": t, "result": r}
                    for (a, b, t), r in sorted(B.pi.lam.items())],
            "app": [{"dom": a, "cod": b, "fn": f, "arg": s, "result": r}
                    for (a, b, f, s), r in sorted(B.pi.app.items())],
        }
    return doc


def base_cwf_from_doc(doc: dict, bases: dict[str, FinCat], name: str = "") -> BaseCwF:
    cat_ref = doc.get("cat")
    if isinstance(cat_ref, str):
        if cat_ref not in bases:
            raise StructuralError(f"base CwF {name!r}: unknown category {cat_ref!r}")
        cat = bases[cat_ref]
    elif isinstance(cat_ref, dict):
        cat = category_from_doc(cat_ref, name=f"{name}.cat")
    else:
        raise StructuralError(f"base CwF {name!r}: missing category")
    try:
        pi = None
        if "pi" in doc:
            pi = PiTables(
                pi_ty={(e["dom"], e["cod"]): e["result"] for e in doc["pi"]["pi_ty"]},
                lam={(e["dom"], e["cod"], e["tm"]): e["result"]
                     for e in doc["pi"]["lam"]},
                app={(e["dom"], e["cod"], e["fn"], e["arg"]): e["result"]
                     for e in doc["pi"]["app"]},
            )
        return BaseCwF(
            cat=cat,
            terminal=doc["terminal"],
            bang=dict(doc["bang"]),
            ty={obj: tuple(tys) for obj, tys in doc["ty"].items()},
            ty_subst={(e["ty"], e["mor"]): e["result"] for e in doc["ty_subst"]},
            tm={(e["obj"], e["ty"]): tuple(e["terms"]) for e in doc["tm"]},
            tm_subst={(e["tm"], e["mor"]): e["result"] for e in doc["tm_subst"]},
            compr={(e["obj"], e["ty"]): e["result"] for e in doc["compr"]},
            p={(e["obj"], e["ty"]): e["result"] for e in doc["p"]},
            v={(e["obj"], e["ty"]): e["result"] for e in doc["v"]},
            ext={(e["mor"], e["ty"], e["tm"]): e["result"] for e in doc["ext"]},
            pi=pi,
            name=name,
        )
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed base CwF document {name!r}: {exc}") from None


# --- the manifest ---

@dataclass
class SuiteSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class Manifest:
    categories: dict[str, FinCat] = field(default_factory=dict)
    presheaves: dict[str, Presheaf] = field(default_factory=dict)
    deptys: dict[str, DepTy] = field(default_factory=dict)
    nats: dict[str, NatTrans] = field(default_factory=dict)
    terms: dict[str, Term] = field(default_factory=dict)
    base_cwfs: dict[str, BaseCwF] = field(default_factory=dict)
    suites: list[SuiteSpec] = field(default_factory=list)
    budgets: dict = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    seed: int = 0
    load_report: ValidationReport = field(
        default_factory=lambda: ValidationReport("manifest"))
    invalid: set[str] = field(default_factory=set)


def _deref(value: Any, base_dir: Optional[Path], where: str) -> Any:
    if isinstance(value, dict) and "$ref" in value:
        if base_dir is None:
            raise StructuralError(f"{where}: $ref without a base directory")
        path = base_dir / value["$ref"]
        if not path.exists():
            raise StructuralError(f"{where}: reference {value['$ref']!r} not found")
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise StructuralError(
                f"{where}: parse error in {value['$ref']!r} at line "
                f"{exc.lineno} column {exc.colno}") from None
    return value


def manifest_from_doc(doc: dict, base_dir: Optional[Path] = None,
                      strict: bool = True) -> Manifest:
    if doc.get("v", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise StructuralError(f"unsupported schema version {doc.get('v')!r}")
    m = Manifest(seed=int(doc.get("seed", 0)))
    m.budgets.update(doc.get("budgets", {}))

    def note(subject: str, rep: ValidationReport) -> None:
        if not rep.ok:
            m.invalid.add(subject)
            for v in rep.violations:
                m.load_report.violations.append(v)
                v.witness.setdefault("subject", subject)

    for name, raw in doc.get("categories", {}).items():
        cat = category_from_doc(_deref(raw, base_dir, f"category {name!r}"), name)
        m.categories[name] = cat
        note(f"category:{name}", validate_category(cat))
    for name, raw in doc.get("presheaves", {}).items():
        ps = presheaf_from_doc(_deref(raw, base_dir, f"presheaf {name!r}"),
                               m.categories, name)
        m.presheaves[name] = ps
        note(f"presheaf:{name}", validate_presheaf(ps))
    for name, raw in doc.get("deptys", {}).items():
        A = depty_from_doc(_deref(raw, base_dir, f"type {name!r}"),
                           m.presheaves, name)
        m.deptys[name] = A
        note(f"type:{name}", validate_depty(A))
    for name, raw in doc.get("nats", {}).items():
        nt = nat_from_doc(_deref(raw, base_dir, f"transformation {name!r}"),
                          m.presheaves, name)
        m.nats[name] = nt
        note(f"transformation:{name}", validate_nat(nt))
    for name, raw in doc.get("terms", {}).items():
        t = term_from_doc(_deref(raw, base_dir, f"term {name!r}"),
                          m.presheaves, m.deptys, name)
        m.terms[name] = t
        note(f"term:{name}", validate_term(t))
    for name, raw in doc.get("base_cwfs", {}).items():
        B = base_cwf_from_doc(_deref(raw, base_dir, f"base CwF {name!r}"),
                              m.categories, name)
        m.base_cwfs[name] = B
        note(f"base_cwf:{name}", validate_base_cwf(B))

    for s in doc.get("suites", []):
        if isinstance(s, str):
            m.suites.append(SuiteSpec(s))
        else:
            m.suites.append(SuiteSpec(s["name"], s.get("params", {})))

    if strict and not m.load_report.ok:
        from .errors import InvalidStructureError
        raise InvalidStructureError(m.load_report)
    return m


def load_manifest(path: str | Path, strict: bool = True) -> Manifest:
    p = Path(path)
    if not p.exists():
        raise StructuralError(f"manifest {str(p)!r} not found")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise StructuralError(
            f"parse error in {p.name} at line {exc.lineno} column {exc.colno}"
        ) from None
    return manifest_from_doc(doc, base_dir=p.parent, strict=strict)
