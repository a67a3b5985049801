"""Suite orchestration and machine-readable reports.

A suite is a named batch of checks over the objects of a manifest.  The
runner executes the requested suites, collects every check (pass, fail
with witness, or skipped with reason) and assembles a deterministic
report: checks are sorted by id and wall-clock timings are kept out of
the JSON form so identical inputs yield identical bytes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

from .cwf import (
    comprehension,
    enumerate_terms,
    ext,
    law_suite_cwf,
    proj_p,
    q_morphism,
    term_equal,
    tm_subst,
    ty_subst,
    validate_term,
    var_v,
)
from .errors import CapacityError, StructuralError
from .fincat import hom_set
from .fixtures import constant_depty
from .internal import (
    closed_iso,
    ctx_iso,
    faithfulness_report,
    hom_iso,
    internal_pi_terms,
    internal_terms,
    vtm_iso,
    vty_iso,
)
from .manifest import Manifest
from .modality import (
    Telescope,
    box_intro,
    box_presheaf,
    box_tm,
    box_ty,
    build_telescope,
    counit,
    letbox,
    tele_concat,
    tele_subst,
    tele_weaken,
)
from .pi import lam, lam_inv, law_suite_pi, pi_ty
from .presheaf import enumerate_nats, validate_nat
from .report import PASS, LawCheck, LawReport

ANCHOR_VALIDATE = "artifact/validation"
ANCHOR_MODALITY = "modality/idempotent-comonad"
ANCHOR_MODALITY_TYPES = "modality/boxed-types"
ANCHOR_MODALITY_ELIM = "modality/eliminator"
ANCHOR_PI_ISO = "pi/iso"


@dataclass
class Report:
    seed: int
    checks: list[LawCheck] = field(default_factory=list)
    suite_ms: dict[str, int] = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        counts = {"total": len(self.checks), "passed": 0, "failed": 0, "skipped": 0}
        for c in self.checks:
            key = {"pass": "passed", "fail": "failed", "skipped": "skipped"}[c.status]
            counts[key] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_doc(self) -> dict:
        return {
            "v": 1,
            "seed": self.seed,
            "checks": [c.to_doc() for c in sorted(self.checks,
                                                  key=lambda c: c.check_id)],
            "summary": self.summary,
        }


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_doc(), indent=2, sort_keys=True) + "\n").encode()
    if fmt == "text":
        lines = []
        for c in sorted(report.checks, key=lambda c: c.check_id):
            line = f"[{c.status:>7}] {c.check_id}  ({c.anchor})"
            if c.witness and c.status != PASS:
                line += f"  {json.dumps(c.witness, sort_keys=True, default=repr)}"
            lines.append(line)
        s = report.summary
        lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, "
                     f"{s['skipped']} skipped")
        for suite, ms in report.suite_ms.items():
            lines.append(f"  {suite}: {ms} ms")
        return ("\n".join(lines) + "\n").encode()
    raise StructuralError(f"unknown report format {fmt!r}")


SuiteFn = Callable[[Manifest, dict], LawReport]
SUITES: dict[str, SuiteFn] = {}


def suite(name: str):
    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn
    return register


def run_suites(m: Manifest) -> Report:
    """Execute the manifest's suites; an empty suite list is an empty
    report (exit 0 semantics)."""
    report = Report(seed=m.seed)
    for spec in m.suites:
        names = list(SUITES) if spec.name == "all" else [spec.name]
        for name in names:
            if name not in SUITES:
                raise StructuralError(f"unknown suite {name!r}")
            started = time.monotonic()
            try:
                rep = SUITES[name](m, spec.params)
            except CapacityError as exc:
                rep = LawReport()
                rep.skipped(f"{name}.capacity", ANCHOR_VALIDATE, str(exc))
            report.checks.extend(rep.checks)
            report.suite_ms[name] = int((time.monotonic() - started) * 1000)
    seen = set()
    for c in report.checks:
        if c.check_id in seen:
            raise StructuralError(f"duplicate check id {c.check_id!r}")
        seen.add(c.check_id)
    return report


@suite("validate")
def suite_validate(m: Manifest, params: dict) -> LawReport:
    rep = LawReport()
    groups = [("category", m.categories), ("presheaf", m.presheaves),
              ("type", m.deptys), ("transformation", m.nats),
              ("term", m.terms), ("base_cwf", m.base_cwfs)]
    for kind, group in groups:
        for name in sorted(group):
            subject = f"{kind}:{name}"
            check_id = f"validate.{kind}.{name}"
            if subject in m.invalid:
                witnesses = [v.to_doc() for v in m.load_report.violations
                             if v.witness.get("subject") == subject]
                rep.failed(check_id, ANCHOR_VALIDATE,
                           {"violations": witnesses[:5]})
            else:
                rep.passed(check_id, ANCHOR_VALIDATE)
    return rep


def _valid(m: Manifest, kind: str, name: str) -> bool:
    return f"{kind}:{name}" not in m.invalid


@suite("cwf_laws")
def suite_cwf_laws(m: Manifest, params: dict) -> LawReport:
    rep = LawReport()
    type_names = params.get("types")
    if type_names is None:
        type_names = sorted(m.deptys)
    domain_names = params.get("domains")
    if domain_names is None:
        domain_names = sorted(m.presheaves)
    for ty_name in type_names:
        if ty_name not in m.deptys:
            rep.skipped(f"cwf.instances[{ty_name}]", "cwf/comprehension-laws",
                        f"unknown type {ty_name!r}")
            continue
        if not _valid(m, "type", ty_name):
            rep.skipped(f"cwf.instances[{ty_name}]", "cwf/comprehension-laws",
                        "type failed validation")
            continue
        A = m.deptys[ty_name]
        gamma = A.ctx
        extended = comprehension(gamma, A)
        for dom_name in domain_names:
            delta = m.presheaves.get(dom_name)
            if delta is None or not _valid(m, "presheaf", dom_name):
                continue
            if delta.base != gamma.base:
                continue
            idx = 0
            for sigma in enumerate_nats(delta, gamma):
                A_s = ty_subst(A, sigma)
                for M in enumerate_terms(A_s):
                    for sigma_prime in enumerate_nats(delta, extended):
                        inst = f"{ty_name}:{dom_name}:{idx}"
                        rep.extend(law_suite_cwf(gamma, delta, A, sigma, M,
                                                 sigma_prime, instance=inst))
                        idx += 1
            if idx == 0:
                rep.skipped(f"cwf.instances[{ty_name}:{dom_name}]",
                            "cwf/comprehension-laws",
                            "no coherent families over this domain")
    return rep


@suite("pi")
def suite_pi(m: Manifest, params: dict) -> LawReport:
    rep = LawReport()
    budget = m.budgets.get("pi_fiber_budget", 10_000)
    pairs = params.get("pairs")
    if pairs is None:
        # every (A, B) with B living over the extension of A's context by A
        pairs = []
        for a_name in sorted(m.deptys):
            if not _valid(m, "type", a_name):
                continue
            A = m.deptys[a_name]
            extended = comprehension(A.ctx, A)
            for b_name in sorted(m.deptys):
                if b_name != a_name and _valid(m, "type", b_name) \
                        and m.deptys[b_name].ctx == extended:
                    pairs.append([a_name, b_name])
    for pair in pairs:
        a_name, b_name = pair
        tag = f"{a_name}->{b_name}"
        if a_name not in m.deptys or b_name not in m.deptys:
            rep.skipped(f"pi.pair[{tag}]", ANCHOR_PI_ISO, "unknown type name")
            continue
        if not (_valid(m, "type", a_name) and _valid(m, "type", b_name)):
            rep.skipped(f"pi.pair[{tag}]", ANCHOR_PI_ISO, "type failed validation")
            continue
        A, B = m.deptys[a_name], m.deptys[b_name]
        gamma = A.ctx
        if B.ctx != comprehension(gamma, A):
            rep.skipped(f"pi.pair[{tag}]", ANCHOR_PI_ISO,
                        "codomain type does not extend the domain type")
            continue
        P = pi_ty(A, B, budget)

        curried = enumerate_terms(B)
        functions = enumerate_terms(P)
        if len(curried) == len(functions):
            rep.passed(f"pi.iso-card[{tag}]", ANCHOR_PI_ISO)
        else:
            rep.failed(f"pi.iso-card[{tag}]", ANCHOR_PI_ISO,
                       {"curried": len(curried), "functions": len(functions)})
        bad = None
        for M in curried:
            if not term_equal(lam_inv(lam(M, A, pi=P), A, B, pi=P), M):
                bad = {"direction": "curry-uncurry", "term": M.name or repr(M.assign)}
        for M2 in functions:
            if not term_equal(lam(lam_inv(M2, A, B, pi=P), A, pi=P), M2):
                bad = {"direction": "uncurry-curry"}
        if bad is None:
            rep.passed(f"pi.iso-roundtrip[{tag}]", ANCHOR_PI_ISO)
        else:
            rep.failed(f"pi.iso-roundtrip[{tag}]", ANCHOR_PI_ISO, bad)

        tops = [name for name, ps in sorted(m.presheaves.items())
                if ps.base == gamma.base and _valid(m, "presheaf", name)]
        idx = 0
        argument_terms = enumerate_terms(A) or [None]
        for dom_name in tops:
            delta = m.presheaves[dom_name]
            for sigma in enumerate_nats(delta, gamma):
                q = q_morphism(sigma, A)
                A_s = ty_subst(A, sigma)
                B_q = ty_subst(B, q)
                pre = {"pi_AB": P, "q": q, "A_s": A_s, "B_q": B_q,
                       "pi_sub": pi_ty(A_s, B_q, budget)}
                n_primes = enumerate_terms(A_s) or [None]
                for M in curried:
                    for N in argument_terms:
                        for Np in n_primes:
                            inst = f"{tag}:{dom_name}:{idx}"
                            rep.extend(law_suite_pi(
                                sigma, A, B, M, N=N, N_prime=Np,
                                instance=inst, budget=budget,
                                precomputed=pre))
                            idx += 1
    return rep


@suite("internalize")
def suite_internalize(m: Manifest, params: dict) -> LawReport:
    rep = LawReport()
    base_names = params.get("bases")
    if base_names is None:
        base_names = sorted(m.base_cwfs)
    for name in base_names:
        if name not in m.base_cwfs:
            rep.skipped(f"internal.base[{name}]", "internal/operators",
                        f"unknown base {name!r}")
            continue
        if not _valid(m, "base_cwf", name):
            rep.skipped(f"internal.base[{name}]", "internal/operators",
                        "base failed validation")
            continue
        B = m.base_cwfs[name]
        for iso_fn, anchor in [(ctx_iso, "internal/objects"),
                               (hom_iso, "internal/homs"),
                               (vty_iso, "internal/types"),
                               (vtm_iso, "internal/terms")]:
            iso = iso_fn(B)
            check_id = f"internal.{iso.name}[{name}]"
            if iso.ok:
                rep.passed(check_id, anchor)
            else:
                rep.failed(check_id, anchor, iso.to_doc())
        for iso in closed_iso(B):
            check_id = f"internal.{iso.name}[{name}]"
            if iso.ok:
                rep.passed(check_id, "internal/closed")
            else:
                rep.failed(check_id, "internal/closed", iso.to_doc())

        terms = internal_terms(B)
        invalid = [t for t, term in terms.items() if not validate_term(term).ok]
        if invalid:
            rep.failed(f"internal.operators[{name}]", "internal/operators",
                       {"invalid": invalid})
        else:
            rep.passed(f"internal.operators[{name}]", "internal/operators")

        faith = faithfulness_report(B, terms)
        for c in faith.checks:
            rep.checks.append(LawCheck(f"{c.check_id}[{name}]", c.anchor,
                                       c.status, c.witness))

        pi_terms = internal_pi_terms(B)
        if pi_terms is None:
            rep.skipped(f"internal.pi-operators[{name}]", "internal/operators",
                        "no function-space structure on this base")
        else:
            invalid = [t for t, term in pi_terms.items()
                       if not validate_term(term).ok]
            if invalid:
                rep.failed(f"internal.pi-operators[{name}]",
                           "internal/operators", {"invalid": invalid})
            else:
                rep.passed(f"internal.pi-operators[{name}]", "internal/operators")
    return rep


@suite("modality")
def suite_modality(m: Manifest, params: dict) -> LawReport:
    rep = LawReport()
    instances = params.get("instances")
    if instances is None:
        # every presheaf whose base has a terminal object, paired with each
        # type over it (and once bare)
        instances = []
        for ctx_name in sorted(m.presheaves):
            if not _valid(m, "presheaf", ctx_name):
                continue
            base = m.presheaves[ctx_name].base
            terminal = next(
                (t for t in base.objects
                 if all(len(hom_set(base, d, t)) == 1 for d in base.objects)),
                None)
            if terminal is None:
                continue
            tys = [ty_name for ty_name in sorted(m.deptys)
                   if _valid(m, "type", ty_name)
                   and m.deptys[ty_name].ctx == m.presheaves[ctx_name]]
            if tys:
                instances.extend({"ctx": ctx_name, "terminal": terminal,
                                  "ty": ty_name} for ty_name in tys)
            else:
                instances.append({"ctx": ctx_name, "terminal": terminal})
    for inst in instances:
        ctx_name, t = inst["ctx"], inst["terminal"]
        ty_name = inst.get("ty")
        tag = f"{ctx_name}@{t}" + (f":{ty_name}" if ty_name else "")
        if ctx_name not in m.presheaves or not _valid(m, "presheaf", ctx_name):
            rep.skipped(f"modality.instance[{tag}]", ANCHOR_MODALITY,
                        "context unavailable")
            continue
        gamma = m.presheaves[ctx_name]
        boxed = box_presheaf(gamma, t)
        if box_presheaf(boxed, t) == boxed:
            rep.passed(f"modality.idempotent[{tag}]", ANCHOR_MODALITY)
        else:
            rep.failed(f"modality.idempotent[{tag}]", ANCHOR_MODALITY,
                       {"ctx": ctx_name})
        eps = counit(gamma, t)
        nat_rep = validate_nat(eps)
        if nat_rep.ok:
            rep.passed(f"modality.counit-natural[{tag}]", ANCHOR_MODALITY)
        else:
            rep.failed(f"modality.counit-natural[{tag}]", ANCHOR_MODALITY,
                       {"violations": [v.to_doc() for v in nat_rep.violations[:3]]})

        if ty_name and ty_name in m.deptys and _valid(m, "type", ty_name) \
                and m.deptys[ty_name].ctx == gamma:
            A = m.deptys[ty_name]
            bA = box_ty(A, t)
            lhs = comprehension(boxed, bA)
            rhs = box_presheaf(comprehension(gamma, A), t)
            if lhs == rhs:
                rep.passed(f"modality.box-comprehension[{tag}]",
                           ANCHOR_MODALITY_TYPES)
            else:
                rep.failed(f"modality.box-comprehension[{tag}]",
                           ANCHOR_MODALITY_TYPES, {"ty": ty_name})
            if box_ty(bA, t) == bA:
                rep.passed(f"modality.box-ty-idempotent[{tag}]",
                           ANCHOR_MODALITY_TYPES)
            else:
                rep.failed(f"modality.box-ty-idempotent[{tag}]",
                           ANCHOR_MODALITY_TYPES, {"ty": ty_name})
            boxed_terms = [box_tm(M, t) for M in enumerate_terms(A)]
            if all(box_tm(bM, t) == bM for bM in boxed_terms):
                rep.passed(f"modality.box-tm-idempotent[{tag}]",
                           ANCHOR_MODALITY_TYPES)
            else:
                rep.failed(f"modality.box-tm-idempotent[{tag}]",
                           ANCHOR_MODALITY_TYPES, {"ty": ty_name})

        # eliminator: every generated well-shaped input yields a valid
        # term; the family is capped deterministically per shape so large
        # carriers cannot blow the run up
        checked = 0
        failed = None
        pair_cap = int(params.get("letbox_pairs", 16))
        for a_fibers in (("a0",), ("a0", "a1")):
            A_const = constant_depty(boxed, a_fibers, name="A")
            for entries in ((), ("c0", "c1")):
                tele = (build_telescope(boxed, [constant_depty(boxed, entries,
                                                               name="K")])
                        if entries else Telescope(boxed, ()))
                concat = tele_concat(boxed, tele)
                w = tele_weaken(boxed, tele)
                bA = box_ty(A_const, t)
                bAw = ty_subst(bA, w)
                Bty = constant_depty(comprehension(concat, bAw), ("r0", "r1"),
                                     name="B")
                ge = comprehension(boxed, bA)
                tele_sub, qp = tele_subst(proj_p(boxed, bA), tele)
                w_n = tele_weaken(ge, tele_sub)
                top_var = tm_subst(var_v(boxed, bA), w_n)
                sig_n = ext(qp, bAw, top_var)
                NT = ty_subst(Bty, sig_n)
                pairs_left = pair_cap
                for M in enumerate_terms(bAw):
                    if pairs_left <= 0:
                        break
                    for N in enumerate_terms(NT):
                        if pairs_left <= 0:
                            break
                        out = letbox(gamma, t, A_const, tele, Bty, M, N)
                        checked += 1
                        pairs_left -= 1
                        if not validate_term(out).ok:
                            failed = {"telescope": len(tele),
                                      "domain_size": len(a_fibers)}
        if failed is None and checked:
            rep.passed(f"modality.letbox-wellformed[{tag}]", ANCHOR_MODALITY_ELIM)
        elif failed:
            rep.failed(f"modality.letbox-wellformed[{tag}]", ANCHOR_MODALITY_ELIM,
                       failed)
        else:
            rep.skipped(f"modality.letbox-wellformed[{tag}]", ANCHOR_MODALITY_ELIM,
                        "no generated inputs")
        # introduction under the telescope stays valid too
        A_const = constant_depty(boxed, ("a0", "a1"), name="A")
        tele = build_telescope(boxed, [constant_depty(boxed, ("c0",), name="K")])
        ok = all(validate_term(box_intro(M, tele, t)).ok
                 for M in enumerate_terms(A_const))
        if ok:
            rep.passed(f"modality.box-intro[{tag}]", ANCHOR_MODALITY_ELIM)
        else:
            rep.failed(f"modality.box-intro[{tag}]", ANCHOR_MODALITY_ELIM, {})
    return rep
