"""The category-with-families structure on a finite presheaf category.

Semantic types are tabulated presheaves over the category of elements of
their context; semantic terms are dependent choice functions compatible
with every restriction.  Comprehension, the weakening projection, the
variable term, substitution extension, and the lifted substitution are
all computed as tables, and the three comprehension laws are checked by
exact table equality.

Comprehension carriers are tagged pairs ``(s, a)``; the surjective
pairing law is then literally tuple extensionality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .elems import Elem, elem_sort_key, sort_elems
from .errors import InvalidStructureError, StructuralError
from .presheaf import (
    NatTrans,
    Presheaf,
    elem_morphisms,
    nat_compose,
    validate_nat,
    validate_presheaf,
)
from .report import LawReport, ValidationReport
from .search import forced_search

ANCHOR_LAWS = "cwf/comprehension-laws"


@dataclass
class DepTy:
    """A semantic type: finite fibers over every context point, with a
    contravariant action along every element-category morphism."""

    ctx: Presheaf
    fiber: dict[tuple[str, Elem], tuple[Elem, ...]]
    # keyed by (mor d->d2, s2 in ctx(d2), a in fiber(d2, s2)); lands in
    # fiber(d, ctx.act(mor, s2))
    action: dict[tuple[str, Elem, Elem], Elem]
    name: str = field(default="", compare=False)

    def fiber_at(self, d: str, s: Elem) -> tuple[Elem, ...]:
        try:
            return self.fiber[(d, s)]
        except KeyError:
            raise StructuralError(f"no fiber at ({d!r}, {s!r})") from None

    def act(self, mor: str, s2: Elem, a: Elem) -> Elem:
        try:
            return self.action[(mor, s2, a)]
        except KeyError:
            raise StructuralError(
                f"type action missing entry ({mor!r}, {s2!r}, {a!r})") from None


@dataclass
class Term:
    ctx: Presheaf
    ty: DepTy
    assign: dict[tuple[str, Elem], Elem]
    name: str = field(default="", compare=False)

    def at(self, d: str, s: Elem) -> Elem:
        try:
            return self.assign[(d, s)]
        except KeyError:
            raise StructuralError(f"term has no value at ({d!r}, {s!r})") from None


def validate_depty(A: DepTy) -> ValidationReport:
    rep = ValidationReport(f"type {A.name or '<unnamed>'}")
    points = set(A.ctx.points())
    for pt in points:
        if pt not in A.fiber:
            rep.add("fiber-missing", obj=pt[0], elem=repr(pt[1]))
    for pt in A.fiber:
        if pt not in points:
            rep.add("fiber-spurious", obj=pt[0], elem=repr(pt[1]))
    if not rep.ok:
        return rep

    base = A.ctx.base
    for mor, s2 in elem_morphisms(A.ctx):
        m = base.morphisms[mor]
        src_pt = (m.dom, A.ctx.act(mor, s2))
        for a in A.fiber[(m.cod, s2)]:
            if (mor, s2, a) not in A.action:
                rep.add("action-missing", mor=mor, elem=repr(s2), arg=repr(a))
            elif A.action[(mor, s2, a)] not in A.fiber[src_pt]:
                rep.add("action-escapes-fiber", mor=mor, elem=repr(s2),
                        arg=repr(a), result=repr(A.action[(mor, s2, a)]))
    if not rep.ok:
        return rep

    for d, s in sorted(points, key=lambda p: (p[0], elem_sort_key(p[1]))):
        i = base.identity[d]
        for a in A.fiber[(d, s)]:
            if A.action[(i, s, a)] != a:
                rep.add("identity-action", obj=d, elem=repr(s), arg=repr(a),
                        got=repr(A.action[(i, s, a)]))
    for g, f in base.composable_pairs():
        gf = base.composition[(g, f)]
        mg = base.morphisms[g]
        for s3 in A.ctx.elems(mg.cod):
            s_mid = A.ctx.act(g, s3)
            for a in A.fiber[(mg.cod, s3)]:
                direct = A.action[(gf, s3, a)]
                seq = A.action[(f, s_mid, A.action[(g, s3, a)])]
                if direct != seq:
                    rep.add("composition-action", g=g, f=f, elem=repr(s3),
                            arg=repr(a), composite=repr(direct), sequential=repr(seq))
    return rep


def validate_term(M: Term) -> ValidationReport:
    rep = ValidationReport(f"term {M.name or '<unnamed>'}")
    if M.ty.ctx != M.ctx:
        rep.add("context-mismatch")
        return rep
    points = set(M.ctx.points())
    for pt in points:
        if pt not in M.assign:
            rep.add("assignment-missing", obj=pt[0], elem=repr(pt[1]))
        elif M.assign[pt] not in M.ty.fiber[pt]:
            rep.add("assignment-escapes-fiber", obj=pt[0], elem=repr(pt[1]),
                    value=repr(M.assign[pt]))
    for pt in M.assign:
        if pt not in points:
            rep.add("assignment-spurious", obj=pt[0], elem=repr(pt[1]))
    if not rep.ok:
        return rep
    # compatibility with every restriction
    for mor, s in elem_morphisms(M.ctx):
        m = M.ctx.base.morphisms[mor]
        restricted = M.ty.act(mor, s, M.assign[(m.cod, s)])
        expected = M.assign[(m.dom, M.ctx.act(mor, s))]
        if restricted != expected:
            rep.add("term-specification", mor=mor, elem=repr(s),
                    restricted=repr(restricted), assigned=repr(expected))
    return rep


def build_depty(ctx: Presheaf, fiber, action, name="") -> DepTy:
    norm = {pt: sort_elems(elems) for pt, elems in fiber.items()}
    A = DepTy(ctx, norm, dict(action), name=name)
    rep = validate_depty(A)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return A


def build_term(ctx: Presheaf, ty: DepTy, assign, name="") -> Term:
    M = Term(ctx, ty, dict(assign), name=name)
    rep = validate_term(M)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return M


def depty_equal(a: DepTy, b: DepTy) -> bool:
    return a == b


def term_equal(a: Term, b: Term) -> bool:
    return a == b


# --- substitution ---

def ty_subst(A: DepTy, sigma: NatTrans) -> DepTy:
    """Reindex a type along a substitution into its context."""
    if sigma.dst != A.ctx:
        raise StructuralError("substitution codomain is not the type's context")
    ctx = sigma.src
    fiber = {(d, s): A.fiber_at(d, sigma.at(d, s)) for d, s in ctx.points()}
    action = {}
    for mor, s2 in elem_morphisms(ctx):
        m = ctx.base.morphisms[mor]
        for a in fiber[(m.cod, s2)]:
            action[(mor, s2, a)] = A.act(mor, sigma.at(m.cod, s2), a)
    return build_depty(ctx, fiber, action,
                       name=f"{A.name}{{{sigma.name}}}")


def tm_subst(M: Term, sigma: NatTrans) -> Term:
    """Reindex a term along a substitution; its type reindexes with it."""
    if sigma.dst != M.ctx:
        raise StructuralError("substitution codomain is not the term's context")
    ty = ty_subst(M.ty, sigma)
    assign = {(d, s): M.at(d, sigma.at(d, s)) for d, s in sigma.src.points()}
    return build_term(sigma.src, ty, assign, name=f"{M.name}{{{sigma.name}}}")


# --- comprehension structure ---

def comprehension(ctx: Presheaf, A: DepTy) -> Presheaf:
    """Context extension: carriers are dependent pairs (s, a)."""
    if A.ctx != ctx:
        raise StructuralError("type does not live over the given context")
    carrier = {
        d: sort_elems((s, a) for s in ctx.elems(d) for a in A.fiber_at(d, s))
        for d in ctx.base.objects
    }
    action = {}
    for mor, s2 in elem_morphisms(ctx):
        for a in A.fiber_at(ctx.base.morphisms[mor].cod, s2):
            action[(mor, (s2, a))] = (ctx.act(mor, s2), A.act(mor, s2, a))
    ps = Presheaf(ctx.base, carrier, action,
                  name=f"{ctx.name}.{A.name}")
    rep = validate_presheaf(ps)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return ps


def proj_p(ctx: Presheaf, A: DepTy) -> NatTrans:
    """Weakening: first projection out of the extended context."""
    ext_ctx = comprehension(ctx, A)
    comps = {
        d: {pair: pair[0] for pair in ext_ctx.elems(d)}
        for d in ctx.base.objects
    }
    return NatTrans(ext_ctx, ctx, comps, name=f"p({A.name})")


def var_v(ctx: Presheaf, A: DepTy) -> Term:
    """The top variable: second projection, of the weakened type."""
    ext_ctx = comprehension(ctx, A)
    ty = ty_subst(A, proj_p(ctx, A))
    assign = {(d, pair): pair[1] for d, pair in ext_ctx.points()}
    return build_term(ext_ctx, ty, assign, name=f"v({A.name})")


def ext(sigma: NatTrans, A: DepTy, M: Term) -> NatTrans:
    """Substitution extension <sigma, M> into the extended context."""
    if sigma.dst != A.ctx:
        raise StructuralError("substitution codomain is not the type's context")
    if M.ctx != sigma.src:
        raise StructuralError("term context differs from substitution domain")
    if M.ty != ty_subst(A, sigma):
        raise StructuralError("term type is not the reindexed type")
    ext_ctx = comprehension(A.ctx, A)
    comps = {
        d: {s: (sigma.at(d, s), M.at(d, s)) for s in sigma.src.elems(d)}
        for d in sigma.src.base.objects
    }
    nt = NatTrans(sigma.src, ext_ctx, comps, name=f"<{sigma.name},{M.name}>")
    rep = validate_nat(nt)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return nt


def q_morphism(sigma: NatTrans, A: DepTy) -> NatTrans:
    """Lift a substitution under one binder: <sigma ∘ p, v>."""
    A_sub = ty_subst(A, sigma)
    p_sub = proj_p(sigma.src, A_sub)
    v_sub = var_v(sigma.src, A_sub)
    return ext(nat_compose(sigma, p_sub), A, v_sub)


# --- term enumeration ---

def enumerate_terms(A: DepTy) -> list[Term]:
    """All terms of A, by exhaustive choice with forcing: the value at a
    restriction target forces the value at its source."""
    ctx = A.ctx
    order = sorted(ctx.points(), key=lambda p: (p[0], elem_sort_key(p[1])))
    forcings: dict = {p: [] for p in order}
    for mor, s in elem_morphisms(ctx):
        m = ctx.base.morphisms[mor]
        forcings[(m.cod, s)].append(
            ((m.dom, ctx.act(mor, s)),
             (lambda a, _mor=mor, _s=s: A.act(_mor, _s, a))))
    sols = forced_search(order, lambda p: A.fiber_at(*p), forcings)
    terms = [Term(ctx, A, dict(sol)) for sol in sols]
    terms.sort(key=lambda t: elem_sort_key(
        tuple(t.assign[p] for p in order)))
    return terms


# --- comparison with witnesses ---

def nat_diff(a: NatTrans, b: NatTrans) -> Optional[dict]:
    if a.src != b.src or a.dst != b.dst:
        return {"mismatch": "endpoints"}
    for d in a.src.base.objects:
        for s in a.src.elems(d):
            if a.at(d, s) != b.at(d, s):
                return {"obj": d, "elem": repr(s),
                        "left": repr(a.at(d, s)), "right": repr(b.at(d, s))}
    return None


def term_diff(a: Term, b: Term) -> Optional[dict]:
    if a.ctx != b.ctx:
        return {"mismatch": "context"}
    if a.ty != b.ty:
        return {"mismatch": "type"}
    for pt in a.ctx.points():
        if a.assign.get(pt) != b.assign.get(pt):
            return {"obj": pt[0], "elem": repr(pt[1]),
                    "left": repr(a.assign.get(pt)), "right": repr(b.assign.get(pt))}
    return None


def depty_diff(a: DepTy, b: DepTy) -> Optional[dict]:
    if a.ctx != b.ctx:
        return {"mismatch": "context"}
    for pt in a.ctx.points():
        if set(a.fiber.get(pt, ())) != set(b.fiber.get(pt, ())):
            return {"obj": pt[0], "elem": repr(pt[1]),
                    "left": repr(a.fiber.get(pt)), "right": repr(b.fiber.get(pt))}
    if a.action != b.action:
        for key in sorted(set(a.action) | set(b.action),
                          key=lambda k: (k[0], elem_sort_key(k[1]), elem_sort_key(k[2]))):
            if a.action.get(key) != b.action.get(key):
                return {"action_key": repr(key),
                        "left": repr(a.action.get(key)), "right": repr(b.action.get(key))}
    return None


# --- the comprehension law suite ---

def law_suite_cwf(gamma: Presheaf, delta: Presheaf, A: DepTy,
                  sigma: NatTrans, M: Term,
                  sigma_prime: Optional[NatTrans] = None,
                  instance: str = "") -> LawReport:
    """Check the three comprehension laws on one coherent input family.

    ``sigma: delta => gamma``, ``M`` a term of the reindexed type over
    ``delta``, and optionally ``sigma_prime: delta => gamma.A`` for the
    surjective-pairing law.
    """
    rep = LawReport()
    tag = f"[{instance}]" if instance else ""
    p = proj_p(gamma, A)
    v = var_v(gamma, A)
    pairing = ext(sigma, A, M)

    diff = nat_diff(nat_compose(p, pairing), sigma)
    if diff is None:
        rep.passed(f"cwf.proj-ext{tag}", ANCHOR_LAWS)
    else:
        rep.failed(f"cwf.proj-ext{tag}", ANCHOR_LAWS, diff)

    diff = term_diff(tm_subst(v, pairing), M)
    if diff is None:
        rep.passed(f"cwf.var-ext{tag}", ANCHOR_LAWS)
    else:
        rep.failed(f"cwf.var-ext{tag}", ANCHOR_LAWS, diff)

    if sigma_prime is not None:
        repaired = ext(nat_compose(p, sigma_prime), A, tm_subst(v, sigma_prime))
        diff = nat_diff(repaired, sigma_prime)
        if diff is None:
            rep.passed(f"cwf.pairing-unique{tag}", ANCHOR_LAWS)
        else:
            rep.failed(f"cwf.pairing-unique{tag}", ANCHOR_LAWS, diff)
    return rep
