"""Internalizing a finitely presented base CwF inside its presheaf category.

A `BaseCwF` packages a finite category together with CwF structure given
by tables: type sets per object, term sets per type, substitution action
of every morphism, and comprehension/projection/variable/extension
entries.  Tables may be partial (a finitely presented fragment of an
infinite CwF); laws are checked exhaustively on the listed entries.

Internalization builds, inside the presheaf category over the base:
semantic types whose fibers are the base objects, hom-sets, type sets and
term sets (with identity restrictions), together with semantic terms for
every operator of the base structure.  Because those types ignore the
ambient world, their term sets are dependent-function sets over the
fibers; `constancy_iso` certifies that bijection element-wise.

A second internalization (`closed_vty`/`closed_vtm`) restricts along the
base substitutions instead of ignoring them; its terms correspond to the
types and terms over the terminal base object, i.e. the closed ones.
Terms of these types cannot mention base variables, so unlike the
world-ignoring internalization they cannot express substitution
operators; only the stated bijections are certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional

from .cwf import (
    DepTy,
    Term,
    build_depty,
    build_term,
    comprehension,
    enumerate_terms,
    proj_p,
    term_equal,
    ty_subst,
    validate_term,
)
from .elems import Elem, elem_sort_key, sort_elems
from .errors import CapacityError, InvalidStructureError, StructuralError
from .fincat import FinCat, hom_set, validate_category
from .presheaf import Presheaf, elem_morphisms, terminal_presheaf
from .report import IsoReport, LawReport, ValidationReport

ANCHOR_FAITHFUL = "internal/faithful"


@dataclass
class PiTables:
    """Function-space structure on a base CwF.

    Keys carry the full decomposition (domain type, codomain type) because
    a bare term id does not determine it: in the one-object model the same
    underlying term is the body of several abstractions.
    """

    pi_ty: dict[tuple[str, str], str]
    lam: dict[tuple[str, str, str], str]
    app: dict[tuple[str, str, str, str], str]


@dataclass
class BaseCwF:
    cat: FinCat
    terminal: str
    bang: dict[str, str]
    ty: dict[str, tuple[str, ...]]
    ty_subst: dict[tuple[str, str], str]
    tm: dict[tuple[str, str], tuple[str, ...]]
    tm_subst: dict[tuple[str, str], str]
    compr: dict[tuple[str, str], str]
    p: dict[tuple[str, str], str]
    v: dict[tuple[str, str], str]
    ext: dict[tuple[str, str, str], str]
    pi: Optional[PiTables] = None
    name: str = field(default="", compare=False)

    def types_at(self, obj: str) -> tuple[str, ...]:
        try:
            return self.ty[obj]
        except KeyError:
            raise StructuralError(f"no type set at {obj!r}") from None

    def terms_at(self, obj: str, ty_id: str) -> tuple[str, ...]:
        try:
            return self.tm[(obj, ty_id)]
        except KeyError:
            raise StructuralError(f"no term set at ({obj!r}, {ty_id!r})") from None

    def subst_ty(self, ty_id: str, mor: str) -> str:
        try:
            return self.ty_subst[(ty_id, mor)]
        except KeyError:
            raise StructuralError(
                f"type substitution missing entry ({ty_id!r}, {mor!r})") from None

    def subst_tm(self, tm_id: str, mor: str) -> str:
        try:
            return self.tm_subst[(tm_id, mor)]
        except KeyError:
            raise StructuralError(
                f"term substitution missing entry ({tm_id!r}, {mor!r})") from None


def validate_base_cwf(B: BaseCwF) -> ValidationReport:
    rep = ValidationReport(f"base CwF {B.name or '<unnamed>'}")
    cat_rep = validate_category(B.cat)
    if not cat_rep.ok:
        rep.add("base-category-invalid", violations=len(cat_rep.violations))
        return rep

    if B.terminal not in B.cat.objects:
        rep.add("terminal-unknown", obj=B.terminal)
        return rep
    for obj in B.cat.objects:
        homs = hom_set(B.cat, obj, B.terminal)
        if B.bang.get(obj) is None or B.bang[obj] not in B.cat.morphisms:
            rep.add("bang-missing", obj=obj)
        elif homs != (B.bang[obj],):
            rep.add("terminal-not-terminal", obj=obj, homs=list(homs))

    for obj in B.cat.objects:
        if obj not in B.ty:
            rep.add("types-missing", obj=obj)
    if not rep.ok:
        return rep

    # substitution actions: total over listed type/term sets, functorial
    for mor_name in sorted(B.cat.morphisms):
        m = B.cat.morphisms[mor_name]
        for T in B.ty[m.cod]:
            res = B.ty_subst.get((T, mor_name))
            if res is None:
                rep.add("ty-subst-missing", ty=T, mor=mor_name)
            elif res not in B.ty[m.dom]:
                rep.add("ty-subst-escapes", ty=T, mor=mor_name, result=res)
    if not rep.ok:
        return rep

    for obj in B.cat.objects:
        seen: dict[str, str] = {}
        for T in B.ty[obj]:
            if (obj, T) not in B.tm:
                rep.add("terms-missing", obj=obj, ty=T)
                continue
            for t in B.tm[(obj, T)]:
                if t in seen:
                    rep.add("term-id-ambiguous", obj=obj, tm=t, types=[seen[t], T])
                seen[t] = T
    if not rep.ok:
        return rep

    for mor_name in sorted(B.cat.morphisms):
        m = B.cat.morphisms[mor_name]
        for T in B.ty[m.cod]:
            target = B.ty_subst[(T, mor_name)]
            for t in B.tm[(m.cod, T)]:
                res = B.tm_subst.get((t, mor_name))
                if res is None:
                    rep.add("tm-subst-missing", tm=t, mor=mor_name)
                elif res not in B.tm[(m.dom, target)]:
                    rep.add("tm-subst-escapes", tm=t, mor=mor_name, result=res)
    if not rep.ok:
        return rep

    for obj in B.cat.objects:
        i = B.cat.identity[obj]
        for T in B.ty[obj]:
            if B.ty_subst[(T, i)] != T:
                rep.add("ty-subst-identity", ty=T, obj=obj)
            for t in B.tm[(obj, T)]:
                if B.tm_subst[(t, i)] != t:
                    rep.add("tm-subst-identity", tm=t, obj=obj)
    for g, f in B.cat.composable_pairs():
        gf = B.cat.composition[(g, f)]
        cod = B.cat.morphisms[g].cod
        for T in B.ty[cod]:
            if B.ty_subst[(T, gf)] != B.ty_subst[(B.ty_subst[(T, g)], f)]:
                rep.add("ty-subst-composition", ty=T, g=g, f=f)
            for t in B.tm[(cod, T)]:
                if B.tm_subst[(t, gf)] != B.tm_subst[(B.tm_subst[(t, g)], f)]:
                    rep.add("tm-subst-composition", tm=t, g=g, f=f)
    if not rep.ok:
        return rep

    # comprehension structure on the listed entries
    for (obj, T), res in B.compr.items():
        if obj not in B.cat.objects or T not in B.ty.get(obj, ()):
            rep.add("compr-key-unknown", obj=obj, ty=T)
            continue
        if res not in B.cat.objects:
            rep.add("compr-result-unknown", obj=obj, ty=T, result=res)
            continue
        p_mor = B.p.get((obj, T))
        if p_mor is None or B.cat.morphisms.get(p_mor) is None:
            rep.add("projection-missing", obj=obj, ty=T)
            continue
        pm = B.cat.morphisms[p_mor]
        if pm.dom != res or pm.cod != obj:
            rep.add("projection-endpoints", obj=obj, ty=T, mor=p_mor)
            continue
        v_tm = B.v.get((obj, T))
        weakened = B.ty_subst[(T, p_mor)]
        if v_tm is None or v_tm not in B.tm[(res, weakened)]:
            rep.add("variable-missing", obj=obj, ty=T, tm=v_tm)
    if not rep.ok:
        return rep

    for (sigma, T, t), res in B.ext.items():
        if sigma not in B.cat.morphisms:
            rep.add("ext-key-unknown-mor", mor=sigma)
            continue
        sm = B.cat.morphisms[sigma]
        if (sm.cod, T) not in B.compr:
            rep.add("ext-key-no-comprehension", mor=sigma, ty=T)
            continue
        if t not in B.tm[(sm.dom, B.ty_subst[(T, sigma)])]:
            rep.add("ext-key-term-mismatch", mor=sigma, ty=T, tm=t)
            continue
        rm = B.cat.morphisms.get(res)
        if rm is None or rm.dom != sm.dom or rm.cod != B.compr[(sm.cod, T)]:
            rep.add("ext-result-endpoints", mor=sigma, ty=T, tm=t, result=res)
            continue
        p_mor = B.p[(sm.cod, T)]
        if B.cat.composition[(p_mor, res)] != sigma:
            rep.add("law-proj-ext", mor=sigma, ty=T, tm=t,
                     got=B.cat.composition[(p_mor, res)])
        if B.tm_subst[(B.v[(sm.cod, T)], res)] != t:
            rep.add("law-var-ext", mor=sigma, ty=T, tm=t,
                     got=B.tm_subst[(B.v[(sm.cod, T)], res)])
    if not rep.ok:
        return rep

    # surjective pairing over every substitution into a listed comprehension
    for (obj, T), res in B.compr.items():
        p_mor = B.p[(obj, T)]
        v_tm = B.v[(obj, T)]
        for delta in B.cat.objects:
            for sp in hom_set(B.cat, delta, res):
                key = (B.cat.composition[(p_mor, sp)], T, B.tm_subst[(v_tm, sp)])
                if key not in B.ext:
                    rep.add("pairing-not-listed", obj=obj, ty=T, mor=sp)
                elif B.ext[key] != sp:
                    rep.add("law-pairing-unique", obj=obj, ty=T, mor=sp,
                            got=B.ext[key])

    if B.pi is not None:
        _validate_pi_tables(B, rep)
    return rep


def _pi_contexts(B: BaseCwF, S: str, T: str) -> list[str]:
    """Objects at which a function-space key (S, T) is well-formed."""
    return [obj for obj in B.cat.objects
            if S in B.ty[obj] and (obj, S) in B.compr
            and T in B.ty[B.compr[(obj, S)]]]


def _validate_pi_tables(B: BaseCwF, rep: ValidationReport) -> None:
    pi = B.pi
    for (S, T), P in pi.pi_ty.items():
        owners = _pi_contexts(B, S, T)
        if not owners:
            rep.add("pi-key-unknown", dom_ty=S, cod_ty=T)
            continue
        for psi in owners:
            if P not in B.ty[psi]:
                rep.add("pi-result-unknown", dom_ty=S, cod_ty=T, obj=psi)
    for (S, T, t), res in pi.lam.items():
        if (S, T) not in pi.pi_ty:
            rep.add("lam-key-no-pi", dom_ty=S, cod_ty=T)
            continue
        for psi in _pi_contexts(B, S, T):
            if t not in B.tm[(B.compr[(psi, S)], T)]:
                rep.add("lam-key-term-mismatch", dom_ty=S, cod_ty=T, tm=t, obj=psi)
            elif res not in B.tm[(psi, pi.pi_ty[(S, T)])]:
                rep.add("lam-result-mismatch", dom_ty=S, cod_ty=T, tm=t, result=res)
    for (S, T, fn, arg), res in pi.app.items():
        if (S, T) not in pi.pi_ty:
            rep.add("app-key-no-pi", dom_ty=S, cod_ty=T)
            continue
        for psi in _pi_contexts(B, S, T):
            if fn not in B.tm[(psi, pi.pi_ty[(S, T)])] or arg not in B.tm[(psi, S)]:
                rep.add("app-key-term-mismatch", dom_ty=S, cod_ty=T, fn=fn, arg=arg)
                continue
            pair = B.ext.get((B.cat.identity[psi], S, arg))
            if pair is None:
                rep.add("app-extension-not-listed", dom_ty=S, cod_ty=T, arg=arg)
            elif res not in B.tm[(psi, B.ty_subst[(T, pair)])]:
                rep.add("app-result-mismatch", dom_ty=S, cod_ty=T, fn=fn,
                        arg=arg, result=res)

    # the four function-space laws, on every listed entry where the
    # required substitution data is itself listed
    for (S, T), P in pi.pi_ty.items():
        for psi in _pi_contexts(B, S, T):
            for delta in B.cat.objects:
                for sigma in hom_set(B.cat, delta, psi):
                    q = _base_q(B, sigma, S)
                    if q is None:
                        continue
                    S_s = B.ty_subst[(S, sigma)]
                    T_q = B.ty_subst[(T, q)]
                    target = pi.pi_ty.get((S_s, T_q))
                    if target is None:
                        continue
                    if B.ty_subst[(P, sigma)] != target:
                        rep.add("law-pi-subst", dom_ty=S, cod_ty=T, mor=sigma,
                                got=B.ty_subst[(P, sigma)], expected=target)
                    for (S2, T2, t), lam_res in pi.lam.items():
                        if (S2, T2) != (S, T):
                            continue
                        rhs_key = (S_s, T_q, B.tm_subst[(t, q)])
                        if rhs_key in pi.lam and \
                                B.tm_subst[(lam_res, sigma)] != pi.lam[rhs_key]:
                            rep.add("law-lam-subst", dom_ty=S, cod_ty=T, tm=t,
                                    mor=sigma)
                    for (S2, T2, fn, arg), app_res in pi.app.items():
                        if (S2, T2) != (S, T) or fn not in B.tm[(psi, P)]:
                            continue
                        rhs_key = (S_s, T_q, B.tm_subst[(fn, sigma)],
                                   B.tm_subst[(arg, sigma)])
                        if rhs_key in pi.app and \
                                B.tm_subst[(app_res, sigma)] != pi.app[rhs_key]:
                            rep.add("law-app-subst", dom_ty=S, cod_ty=T,
                                    fn=fn, arg=arg, mor=sigma)
    for (S, T, t), lam_res in pi.lam.items():
        for psi in _pi_contexts(B, S, T):
            for arg in B.tm[(psi, S)]:
                key = (S, T, lam_res, arg)
                pair = B.ext.get((B.cat.identity[psi], S, arg))
                if key not in pi.app or pair is None:
                    continue
                if pi.app[key] != B.tm_subst[(t, pair)]:
                    rep.add("law-beta", dom_ty=S, cod_ty=T, tm=t, arg=arg,
                            got=pi.app[key], expected=B.tm_subst[(t, pair)])


def _base_q(B: BaseCwF, sigma: str, T: str) -> Optional[str]:
    """The lifted substitution <sigma . p, v> computed from the tables, or
    None when an ingredient is not listed."""
    sm = B.cat.morphisms[sigma]
    T_s = B.ty_subst[(T, sigma)]
    if (sm.cod, T) not in B.compr or (sm.dom, T_s) not in B.compr:
        return None
    p_mor = B.p[(sm.dom, T_s)]
    v_tm = B.v[(sm.dom, T_s)]
    key = (B.cat.composition[(sigma, p_mor)], T, v_tm)
    return B.ext.get(key)


def build_base_cwf(**kwargs) -> BaseCwF:
    B = BaseCwF(**kwargs)
    rep = validate_base_cwf(B)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return B


# --- world-independent contexts and types ---

def const_depty_over(ctx: Presheaf, fiber_fn: Callable[[Elem], Iterable[str]],
                     name: str = "") -> DepTy:
    """Type whose fiber depends only on the context element, with identity
    restrictions.  Well-formed over contexts whose own restrictions are
    identities (all internalization contexts are of this shape)."""
    fiber = {(d, s): sort_elems(fiber_fn(s)) for d, s in ctx.points()}
    action = {}
    for mor, s2 in elem_morphisms(ctx):
        m = ctx.base.morphisms[mor]
        for a in fiber[(m.cod, s2)]:
            action[(mor, s2, a)] = a
    return build_depty(ctx, fiber, action, name=name)


def peel(elem: Elem, depth: int) -> list:
    """Strip `depth` comprehension layers off a nested pair, innermost
    first; the terminal point at the bottom is dropped."""
    vals = []
    cur = elem
    for _ in range(depth):
        vals.append(cur[1])
        cur = cur[0]
    vals.reverse()
    return vals


def iterated_context(cat: FinCat, slot_fns: list, names: Optional[list[str]] = None,
                     ) -> Presheaf:
    """Iterated comprehension over the terminal presheaf.  Slot k receives
    the list of previously chosen values and returns the finite set of
    admissible next values (an empty set prunes that branch)."""
    ctx = terminal_presheaf(cat)
    for k, fn in enumerate(slot_fns):
        nm = names[k] if names else f"slot{k}"
        ty = const_depty_over(ctx, lambda s, _fn=fn, _k=k: _fn(peel(s, _k)), name=nm)
        ctx = comprehension(ctx, ty)
    return ctx


def _world_term(B: BaseCwF, slot_fns: list, fiber_fn, result_fn, name: str) -> Term:
    """A term over an iterated context whose value ignores the world."""
    ctx = iterated_context(B.cat, slot_fns)
    depth = len(slot_fns)
    ty = const_depty_over(ctx, lambda s: fiber_fn(peel(s, depth)), name=f"ty({name})")
    assign = {(d, s): result_fn(peel(s, depth)) for d, s in ctx.points()}
    return build_term(ctx, ty, assign, name=name)


def ctx_ty(B: BaseCwF) -> DepTy:
    """Internal type of base objects: every fiber is the object set."""
    return const_depty_over(terminal_presheaf(B.cat), lambda s: B.cat.objects,
                            name="Ctx")


def hom_ty(B: BaseCwF) -> DepTy:
    """Internal hom type over the context binding two base objects."""
    top = terminal_presheaf(B.cat)
    ctx_t = ctx_ty(B)
    c1 = comprehension(top, ctx_t)
    c2 = comprehension(c1, ty_subst(ctx_t, proj_p(top, ctx_t)))
    return const_depty_over(
        c2, lambda s: hom_set(B.cat, peel(s, 2)[0], peel(s, 2)[1]), name="Hom")


def vty(B: BaseCwF) -> DepTy:
    """Internal type of base types, indexed by an internal context."""
    top = terminal_presheaf(B.cat)
    c1 = comprehension(top, ctx_ty(B))
    return const_depty_over(c1, lambda s: B.types_at(peel(s, 1)[0]), name="VTy")


def vtm(B: BaseCwF) -> DepTy:
    """Internal type of base terms, indexed by context and type."""
    top = terminal_presheaf(B.cat)
    c1 = comprehension(top, ctx_ty(B))
    c2 = comprehension(c1, vty(B))
    return const_depty_over(
        c2, lambda s: B.terms_at(peel(s, 2)[0], peel(s, 2)[1]), name="VTm")


def closed_vty(B: BaseCwF) -> DepTy:
    """World-respecting internal types: the fiber at a world is that
    world's type set, restricted along base substitutions."""
    top = terminal_presheaf(B.cat)
    fiber = {(d, s): sort_elems(B.ty[d]) for d, s in top.points()}
    action = {}
    for mor, s2 in elem_morphisms(top):
        m = top.base.morphisms[mor]
        for T in fiber[(m.cod, s2)]:
            action[(mor, s2, T)] = B.subst_ty(T, mor)
    return build_depty(top, fiber, action, name="VTy'")


def closed_vtm(B: BaseCwF) -> DepTy:
    """World-respecting internal terms over `closed_vty`."""
    ctx = comprehension(terminal_presheaf(B.cat), closed_vty(B))
    fiber = {(d, s): sort_elems(B.terms_at(d, s[1])) for d, s in ctx.points()}
    action = {}
    for mor, s2 in elem_morphisms(ctx):
        m = ctx.base.morphisms[mor]
        for t in fiber[(m.cod, s2)]:
            action[(mor, s2, t)] = B.subst_tm(t, mor)
    return build_depty(ctx, fiber, action, name="VTm'")


# --- the internal operator terms ---

def internal_terms(B: BaseCwF) -> dict[str, Term]:
    objs = B.cat.objects
    hom = lambda a, b: hom_set(B.cat, a, b)

    def compr_tys(psi: str) -> list[str]:
        return [T for T in B.types_at(psi) if (psi, T) in B.compr]

    terms: dict[str, Term] = {}
    terms["id"] = _world_term(
        B,
        [lambda _: objs],
        lambda v: hom(v[0], v[0]),
        lambda v: B.cat.identity[v[0]],
        "id",
    )
    terms["comp"] = _world_term(
        B,
        [lambda _: objs, lambda v: objs, lambda v: objs,
         lambda v: hom(v[1], v[2]), lambda v: hom(v[0], v[1])],
        lambda v: hom(v[0], v[2]),
        lambda v: B.cat.composition[(v[3], v[4])],
        "comp",
    )
    terms["tysub"] = _world_term(
        B,
        [lambda _: objs, lambda v: objs,
         lambda v: B.types_at(v[1]), lambda v: hom(v[0], v[1])],
        lambda v: B.types_at(v[0]),
        lambda v: B.subst_ty(v[2], v[3]),
        "tysub",
    )
    terms["tmsub"] = _world_term(
        B,
        [lambda _: objs, lambda v: objs, lambda v: B.types_at(v[1]),
         lambda v: B.terms_at(v[1], v[2]), lambda v: hom(v[0], v[1])],
        lambda v: B.terms_at(v[0], B.subst_ty(v[2], v[4])),
        lambda v: B.subst_tm(v[3], v[4]),
        "tmsub",
    )
    terms["compr"] = _world_term(
        B,
        [lambda _: objs, lambda v: compr_tys(v[0])],
        lambda v: objs,
        lambda v: B.compr[(v[0], v[1])],
        "compr",
    )
    terms["proj"] = _world_term(
        B,
        [lambda _: objs, lambda v: compr_tys(v[0])],
        lambda v: hom(B.compr[(v[0], v[1])], v[0]),
        lambda v: B.p[(v[0], v[1])],
        "proj",
    )
    terms["var"] = _world_term(
        B,
        [lambda _: objs, lambda v: compr_tys(v[0])],
        lambda v: B.terms_at(B.compr[(v[0], v[1])],
                             B.subst_ty(v[1], B.p[(v[0], v[1])])),
        lambda v: B.v[(v[0], v[1])],
        "var",
    )
    terms["ext"] = _world_term(
        B,
        [lambda _: objs, lambda v: objs, lambda v: compr_tys(v[1]),
         lambda v: hom(v[0], v[1]),
         lambda v: [t for t in B.terms_at(v[0], B.subst_ty(v[2], v[3]))
                    if (v[3], v[2], t) in B.ext]],
        lambda v: hom(v[0], B.compr[(v[1], v[2])]),
        lambda v: B.ext[(v[3], v[2], v[4])],
        "ext",
    )
    terms["q"] = _world_term(
        B,
        [lambda _: objs, lambda v: objs, lambda v: hom(v[0], v[1]),
         lambda v: [T for T in compr_tys(v[1])
                    if _base_q(B, v[2], T) is not None]],
        lambda v: hom(B.compr[(v[0], B.subst_ty(v[3], v[2]))],
                      B.compr[(v[1], v[3])]),
        lambda v: _base_q(B, v[2], v[3]),
        "q",
    )
    return terms


def internal_pi_terms(B: BaseCwF) -> Optional[dict[str, Term]]:
    """Internal function-space operators, or None when the base carries no
    function-space structure."""
    if B.pi is None:
        return None
    pi = B.pi
    objs = B.cat.objects

    def pi_doms(psi: str) -> list[str]:
        return [S for S in B.types_at(psi) if (psi, S) in B.compr]

    def pi_cods(psi: str, S: str) -> list[str]:
        return [T for T in B.types_at(B.compr[(psi, S)]) if (S, T) in pi.pi_ty]

    terms: dict[str, Term] = {}
    terms["pi"] = _world_term(
        B,
        [lambda _: objs, lambda v: pi_doms(v[0]), lambda v: pi_cods(v[0], v[1])],
        lambda v: B.types_at(v[0]),
        lambda v: pi.pi_ty[(v[1], v[2])],
        "pi",
    )
    terms["lam"] = _world_term(
        B,
        [lambda _: objs, lambda v: pi_doms(v[0]), lambda v: pi_cods(v[0], v[1]),
         lambda v: [t for t in B.terms_at(B.compr[(v[0], v[1])], v[2])
                    if (v[1], v[2], t) in pi.lam]],
        lambda v: B.terms_at(v[0], pi.pi_ty[(v[1], v[2])]),
        lambda v: pi.lam[(v[1], v[2], v[3])],
        "lam",
    )

    def app_args(v) -> list[str]:
        psi, S, T, fn = v
        return [s for s in B.terms_at(psi, S)
                if (S, T, fn, s) in pi.app
                and (B.cat.identity[psi], S, s) in B.ext]

    terms["app"] = _world_term(
        B,
        [lambda _: objs, lambda v: pi_doms(v[0]), lambda v: pi_cods(v[0], v[1]),
         lambda v: B.terms_at(v[0], pi.pi_ty[(v[1], v[2])]), app_args],
        lambda v: B.terms_at(
            v[0], B.subst_ty(v[2], B.ext[(B.cat.identity[v[0]], v[1], v[4])])),
        lambda v: pi.app[(v[1], v[2], v[3], v[4])],
        "app",
    )
    return terms


@dataclass
class InternalBundle:
    ctx_ty: DepTy
    hom_ty: DepTy
    vty: DepTy
    vtm: DepTy
    vty_closed: DepTy
    vtm_closed: DepTy
    terms: dict[str, Term]


def build_bundle(B: BaseCwF) -> InternalBundle:
    terms = internal_terms(B)
    pi_terms = internal_pi_terms(B)
    if pi_terms:
        terms.update(pi_terms)
    return InternalBundle(
        ctx_ty=ctx_ty(B),
        hom_ty=hom_ty(B),
        vty=vty(B),
        vtm=vtm(B),
        vty_closed=closed_vty(B),
        vtm_closed=closed_vtm(B),
        terms=terms,
    )


# --- isomorphism suites ---

DEPENDENT_FUNCTION_BUDGET = 200_000


def constancy_iso(A: DepTy, at_world: str, name: str,
                  budget: int = DEPENDENT_FUNCTION_BUDGET) -> IsoReport:
    """Certify that the terms of a world-ignoring type are exactly the
    dependent functions over its fibers at one world.

    Evaluation at `at_world` and constant extension are checked to be
    mutually inverse, element by element.
    """
    ctx = A.ctx
    ref = ctx.elems(at_world)
    for d in ctx.base.objects:
        if ctx.elems(d) != ref:
            raise StructuralError(f"context carrier at {d!r} differs from "
                                  f"the one at {at_world!r}")
    slots = sorted(ref, key=elem_sort_key)
    sizes = [len(A.fiber_at(at_world, s)) for s in slots]
    count = math.prod(sizes) if slots else 1
    if count > budget:
        raise CapacityError(f"dependent-function set of size {count} exceeds "
                            f"budget {budget}")

    terms = enumerate_terms(A)
    mismatches: list[dict] = []

    def evaluate(M: Term) -> tuple:
        return tuple(M.at(at_world, s) for s in slots)

    def constant(vec: tuple) -> Term:
        table = dict(zip(slots, vec))
        assign = {(d, s): table[s] for d, s in ctx.points()}
        return Term(ctx, A, assign)

    for M in terms:
        back = constant(evaluate(M))
        if not term_equal(back, M):
            mismatches.append({"direction": "term-roundtrip",
                               "term": repr(sorted(M.assign.items(),
                                                    key=lambda kv: repr(kv)))})
    vectors = list(product(*(A.fiber_at(at_world, s) for s in slots)))
    for vec in vectors:
        M = constant(vec)
        if not validate_term(M).ok:
            mismatches.append({"direction": "function-not-term", "vector": repr(vec)})
        elif evaluate(M) != vec:
            mismatches.append({"direction": "function-roundtrip", "vector": repr(vec)})
    return IsoReport(name, left_size=len(terms), right_size=len(vectors),
                     mismatches=mismatches)


def ctx_iso(B: BaseCwF) -> IsoReport:
    return constancy_iso(ctx_ty(B), B.terminal, "internal-objects")


def hom_iso(B: BaseCwF) -> IsoReport:
    return constancy_iso(hom_ty(B), B.terminal, "internal-homs")


def vty_iso(B: BaseCwF) -> IsoReport:
    return constancy_iso(vty(B), B.terminal, "internal-types")


def vtm_iso(B: BaseCwF) -> IsoReport:
    return constancy_iso(vtm(B), B.terminal, "internal-terms")


def closed_iso(B: BaseCwF) -> list[IsoReport]:
    """Certify that world-respecting internal types denote the closed base
    types: terms of `closed_vty` biject with the type set at the terminal
    object, which in turn matches the world-ignoring type instantiated at
    the terminal internal context."""
    top = terminal_presheaf(B.cat)
    ty_c = closed_vty(B)
    terms = enumerate_terms(ty_c)
    closed = sorted(B.ty[B.terminal])

    mismatches: list[dict] = []
    for M in terms:
        S = M.at(B.terminal, "*")
        induced = {(d, "*"): B.subst_ty(S, B.bang[d]) for d in B.cat.objects}
        if induced != M.assign:
            mismatches.append({"direction": "term-roundtrip", "value": S})
    for S in closed:
        assign = {(d, "*"): B.subst_ty(S, B.bang[d]) for d in B.cat.objects}
        M = Term(top, ty_c, assign)
        if not validate_term(M).ok:
            mismatches.append({"direction": "type-not-term", "value": S})
        elif M.at(B.terminal, "*") != S:
            mismatches.append({"direction": "type-roundtrip", "value": S})
        else:
            preimages = [N for N in terms if term_equal(N, M)]
            if len(preimages) != 1:
                mismatches.append({"direction": "not-unique", "value": S,
                                   "count": len(preimages)})
    first = IsoReport("closed-types", left_size=len(terms),
                      right_size=len(closed), mismatches=mismatches)

    # second leg: instantiate the world-ignoring type at the terminal
    # internal context and compare term sets with the closed type set
    vt = vty(B)
    c1 = vt.ctx
    from .presheaf import NatTrans, validate_nat
    comps = {d: {"*": ("*", B.terminal)} for d in B.cat.objects}
    sigma_top = NatTrans(top, c1, comps, name="at-terminal")
    if not validate_nat(sigma_top).ok:
        raise StructuralError("terminal-context instantiation is not natural")
    vt_top = ty_subst(vt, sigma_top)
    inst_terms = enumerate_terms(vt_top)
    inst_mismatches: list[dict] = []
    for M in inst_terms:
        S = M.at(B.terminal, "*")
        if S not in closed:
            inst_mismatches.append({"direction": "escapes-closed", "value": S})
        if any(val != S for val in M.assign.values()):
            inst_mismatches.append({"direction": "not-constant", "value": S})
    second = IsoReport("terminal-instantiated-types", left_size=len(inst_terms),
                       right_size=len(closed), mismatches=inst_mismatches)
    return [first, second]


# --- faithfulness of the internal operators ---

def faithfulness_report(B: BaseCwF, terms: Optional[dict[str, Term]] = None,
                        ) -> LawReport:
    """Check that evaluating the internal operator terms pointwise, at
    every world, reproduces the base tables entry for entry, and that the
    base category laws hold through the internal composition."""
    rep = LawReport()
    terms = terms or internal_terms(B)
    comp_t, id_t, q_t = terms["comp"], terms["id"], terms["q"]

    def comp_at(world: str, psi: str, psi1: str, psi2: str,
                s1: str, s0: str) -> str:
        elem = ((((("*", psi), psi1), psi2), s1), s0)
        return comp_t.at(world, elem)

    bad = []
    for world in B.cat.objects:
        for d, s in id_t.ctx.points():
            if d != world:
                continue
            psi = peel(s, 1)[0]
            if id_t.at(d, s) != B.cat.identity[psi]:
                bad.append({"world": d, "obj": psi})
    if bad:
        rep.failed("internal.id-table", ANCHOR_FAITHFUL, {"mismatches": bad[:3]})
    else:
        rep.passed("internal.id-table", ANCHOR_FAITHFUL)

    bad = []
    for world in B.cat.objects:
        for d, s in comp_t.ctx.points():
            if d != world:
                continue
            psi, psi1, psi2, s1, s0 = peel(s, 5)
            if comp_t.at(d, s) != B.cat.composition[(s1, s0)]:
                bad.append({"world": d, "pair": (s1, s0)})
    if bad:
        rep.failed("internal.comp-table", ANCHOR_FAITHFUL, {"mismatches": bad[:3]})
    else:
        rep.passed("internal.comp-table", ANCHOR_FAITHFUL)

    # category laws evaluated through the internal terms
    bad = []
    for world in B.cat.objects:
        for mor_name in sorted(B.cat.morphisms):
            m = B.cat.morphisms[mor_name]
            if comp_at(world, m.dom, m.dom, m.cod, mor_name,
                       B.cat.identity[m.dom]) != mor_name:
                bad.append({"world": world, "mor": mor_name, "law": "right-identity"})
            if comp_at(world, m.dom, m.cod, m.cod, B.cat.identity[m.cod],
                       mor_name) != mor_name:
                bad.append({"world": world, "mor": mor_name, "law": "left-identity"})
    if bad:
        rep.failed("internal.identity-laws", ANCHOR_FAITHFUL, {"mismatches": bad[:3]})
    else:
        rep.passed("internal.identity-laws", ANCHOR_FAITHFUL)

    bad = []
    for world in B.cat.objects:
        for h, g, f in _composable_triples(B.cat):
            mh, mg, mf = (B.cat.morphisms[x] for x in (h, g, f))
            left = comp_at(world, mf.dom, mg.cod, mh.cod, h,
                           comp_at(world, mf.dom, mf.cod, mg.cod, g, f))
            right = comp_at(world, mf.dom, mf.cod, mh.cod,
                            comp_at(world, mg.dom, mg.cod, mh.cod, h, g), f)
            if left != right:
                bad.append({"world": world, "triple": (h, g, f)})
    if bad:
        rep.failed("internal.associativity", ANCHOR_FAITHFUL, {"mismatches": bad[:3]})
    else:
        rep.passed("internal.associativity", ANCHOR_FAITHFUL)

    bad = []
    for world in B.cat.objects:
        for d, s in q_t.ctx.points():
            if d != world:
                continue
            phi, psi, sigma, T = peel(s, 4)
            expected = _base_q(B, sigma, T)
            if q_t.at(d, s) != expected:
                bad.append({"world": d, "mor": sigma, "ty": T})
    if bad:
        rep.failed("internal.q-table", ANCHOR_FAITHFUL, {"mismatches": bad[:3]})
    else:
        rep.passed("internal.q-table", ANCHOR_FAITHFUL)
    return rep


def _composable_triples(cat: FinCat):
    for g, f in cat.composable_pairs():
        mg = cat.morphisms[g]
        for h in sorted(cat.morphisms):
            if cat.morphisms[h].dom == mg.cod:
                yield h, g, f
