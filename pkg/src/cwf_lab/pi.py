"""Dependent function spaces in the presheaf model.

The naive fiber "functions from A(Ψ,s) to B(Ψ,(s,a))" has no restriction
map: the context point occurs both co- and contravariantly, and over the
walking arrow the transport recipe is already partial (an element of the
source fiber need not be in the image of the restriction, see the
negative test).  The working definition is Kripke-style: an element of
the function space at (Ψ, s) is a table indexed by *all* arrows into Ψ
and all arguments at their sources, subject to a coherence predicate
making the table commute with restriction.  Restriction then simply
precomposes the arrow index.

`lam`/`lam_inv` convert between terms over the extended context and
terms of the function space; they are verified mutually inverse, and
application is defined through `lam_inv` plus substitution extension.
"""

from __future__ import annotations

from itertools import product
from typing import Optional

from .cwf import (
    DepTy,
    Term,
    build_depty,
    build_term,
    comprehension,
    depty_diff,
    enumerate_terms,
    ext,
    q_morphism,
    term_diff,
    tm_subst,
    ty_subst,
)
from .elems import Elem, PiElement, elem_sort_key
from .errors import CapacityError, StructuralError
from .presheaf import NatTrans, Presheaf, nat_id
from .report import LawReport

DEFAULT_FIBER_BUDGET = 10_000

ANCHOR_PI_LAWS = "pi/subst-laws"
ANCHOR_PI_BETA = "pi/beta"


def representable(base, psi: str) -> Presheaf:
    """The presheaf of arrows into a fixed object, restriction by
    precomposition."""
    from .fincat import hom_set
    carrier = {d: tuple(sorted(hom_set(base, d, psi))) for d in base.objects}
    action = {}
    for mor_name, m in base.morphisms.items():
        for delta in carrier[m.cod]:
            action[(mor_name, delta)] = base.composition[(delta, mor_name)]
    return Presheaf(base, carrier, action, name=f"y({psi})")


def classifying_map(gamma: Presheaf, psi: str, s: Elem) -> tuple[Presheaf, NatTrans]:
    """The map from the representable at a world that classifies a carrier
    element: an arrow goes to the restriction of the element along it.

    Terms of the codomain type pulled back along this map are exactly the
    coherent tables anchored at (psi, s); the acceptance oracle uses this
    as the independent reconstruction of the function-space fibers.
    """
    y = representable(gamma.base, psi)
    comps = {d: {delta: gamma.act(delta, s) for delta in y.elems(d)}
             for d in gamma.base.objects}
    return y, NatTrans(y, gamma, comps, name=f"<{s!r}@{psi}>")


def anchored_fiber_oracle(A: DepTy, B: DepTy, psi: str, s: Elem) -> set:
    """Reconstruct a function-space fiber without the coherence predicate:
    pull the codomain type back along the classifying map of the anchor
    and read each term of the pullback as a table."""
    gamma = A.ctx
    _, ys = classifying_map(gamma, psi, s)
    q = q_morphism(ys, A)
    B_y = ty_subst(B, q)
    out = set()
    for M in enumerate_terms(B_y):
        table = [((d, delta, a), M.at(d, (delta, a)))
                 for d, (delta, a) in M.ctx.points()]
        out.add(PiElement(table, anchor=(psi, s)))
    return out


def function_keys(A: DepTy, psi: str, s: Elem) -> list[tuple[str, str, Elem]]:
    """The index set of a function table anchored at (psi, s): one entry
    per arrow into psi and argument in the domain fiber at its source."""
    gamma = A.ctx
    keys = []
    for mor in sorted(gamma.base.morphisms):
        m = gamma.base.morphisms[mor]
        if m.cod != psi:
            continue
        for a in A.fiber_at(m.dom, gamma.act(mor, s)):
            keys.append((m.dom, mor, a))
    return keys


def check_coherence(A: DepTy, B: DepTy, psi: str, s: Elem,
                    f: PiElement) -> tuple[bool, Optional[dict]]:
    """Decide the coherence predicate for a total table anchored at
    (psi, s); returns the first violating index as witness."""
    gamma = A.ctx
    required = set(function_keys(A, psi, s))
    have = set(f.keys())
    if required - have:
        missing = sorted(required - have, key=elem_sort_key)
        raise StructuralError(f"partial function table; missing keys {missing[:3]}")
    for (phi, mor, a) in sorted(required, key=elem_sort_key):
        s_phi = gamma.act(mor, s)
        for mor2 in sorted(gamma.base.morphisms):
            m2 = gamma.base.morphisms[mor2]
            if m2.cod != phi:
                continue
            composite = gamma.base.composition[(mor, mor2)]
            lhs = f(m2.dom, composite, A.act(mor2, s_phi, a))
            rhs = B.act(mor2, (s_phi, a), f(phi, mor, a))
            if lhs != rhs:
                return False, {"obj": phi, "mor": mor, "arg": repr(a),
                               "next_mor": mor2, "lhs": repr(lhs), "rhs": repr(rhs)}
    return True, None


def pi_ty(A: DepTy, B: DepTy, budget: int = DEFAULT_FIBER_BUDGET) -> DepTy:
    """The function-space type: fibers are all coherent tables, restriction
    precomposes the arrow index."""
    gamma = A.ctx
    if B.ctx != comprehension(gamma, A):
        raise StructuralError("codomain type must live over the extended context")

    fiber: dict[tuple[str, Elem], tuple[Elem, ...]] = {}
    for psi, s in gamma.points():
        keys = function_keys(A, psi, s)
        domains = []
        total = 1
        for (phi, mor, a) in keys:
            dom = B.fiber_at(phi, (gamma.act(mor, s), a))
            domains.append(dom)
            total *= len(dom)
            if total > budget:
                raise CapacityError(
                    f"function fiber at ({psi!r}, {s!r}) exceeds budget {budget}")
        elems = []
        for values in product(*domains):
            cand = PiElement(zip(keys, values), anchor=(psi, s))
            ok, _ = check_coherence(A, B, psi, s, cand)
            if ok:
                elems.append(cand)
        fiber[(psi, s)] = tuple(sorted(elems, key=elem_sort_key))

    action: dict[tuple[str, Elem, Elem], Elem] = {}
    for mor in sorted(gamma.base.morphisms):
        m = gamma.base.morphisms[mor]
        for s in gamma.elems(m.cod):
            s_new = gamma.act(mor, s)
            for f in fiber[(m.cod, s)]:
                table = []
                for (phi, mor2, a) in function_keys(A, m.dom, s_new):
                    composite = gamma.base.composition[(mor, mor2)]
                    table.append(((phi, mor2, a), f(phi, composite, a)))
                action[(mor, s, f)] = PiElement(table, anchor=(m.dom, s_new))
    return build_depty(gamma, fiber, action,
                       name=f"Pi({A.name},{B.name})")


def lam(M: Term, A: DepTy, pi: Optional[DepTy] = None,
        budget: int = DEFAULT_FIBER_BUDGET) -> Term:
    """Curry a term over the extended context into the function space."""
    gamma = A.ctx
    if M.ctx != comprehension(gamma, A):
        raise StructuralError("term must live over the extended context")
    B = M.ty
    pi = pi if pi is not None else pi_ty(A, B, budget)
    assign = {}
    for psi, s in gamma.points():
        table = []
        for (phi, mor, a) in function_keys(A, psi, s):
            table.append(((phi, mor, a), M.at(phi, (gamma.act(mor, s), a))))
        assign[(psi, s)] = PiElement(table, anchor=(psi, s))
    return build_term(gamma, pi, assign, name=f"lam({M.name})")


def lam_inv(M2: Term, A: DepTy, B: DepTy, pi: Optional[DepTy] = None,
            budget: int = DEFAULT_FIBER_BUDGET) -> Term:
    """Uncurry: evaluate each table at the identity arrow."""
    gamma = A.ctx
    ext_ctx = comprehension(gamma, A)
    if B.ctx != ext_ctx:
        raise StructuralError("codomain type must live over the extended context")
    pi = pi if pi is not None else pi_ty(A, B, budget)
    if M2.ty != pi:
        raise StructuralError("term is not of the function-space type")
    assign = {}
    for d, pair in ext_ctx.points():
        s, a = pair
        assign[(d, pair)] = M2.at(d, s)(d, gamma.base.identity[d], a)
    return build_term(ext_ctx, B, assign, name=f"uncurry({M2.name})")


def app(M: Term, N: Term, A: DepTy, B: DepTy, pi: Optional[DepTy] = None,
        budget: int = DEFAULT_FIBER_BUDGET) -> Term:
    """Apply a function-space term to an argument term."""
    if N.ty != A:
        raise StructuralError("argument type does not match the domain type")
    gamma = A.ctx
    return tm_subst(lam_inv(M, A, B, pi=pi, budget=budget),
                    ext(nat_id(gamma), A, N))


# --- the function-space law suite ---

def law_suite_pi(sigma: NatTrans, A: DepTy, B: DepTy, M: Term,
                 N: Optional[Term] = None, N_prime: Optional[Term] = None,
                 instance: str = "", budget: int = DEFAULT_FIBER_BUDGET,
                 precomputed: Optional[dict] = None) -> LawReport:
    """Check the four substitution/beta laws on one instance.

    ``sigma: delta => gamma``; ``M`` a term over the extended context
    (the abstraction body); optional ``N`` an argument term over gamma;
    optional ``N_prime`` an argument term over delta of the reindexed
    domain type, for the generalized application-substitution lemma.
    ``precomputed`` may carry pi_AB/q/A_s/B_q/pi_sub from an enclosing
    loop over many instances of the same substitution.
    """
    rep = LawReport()
    tag = f"[{instance}]" if instance else ""
    gamma = A.ctx
    delta = sigma.src

    pre = precomputed or {}
    pi_AB = pre.get("pi_AB") if pre.get("pi_AB") is not None else pi_ty(A, B, budget)
    q = pre.get("q") if pre.get("q") is not None else q_morphism(sigma, A)
    A_s = pre.get("A_s") if pre.get("A_s") is not None else ty_subst(A, sigma)
    B_q = pre.get("B_q") if pre.get("B_q") is not None else ty_subst(B, q)
    pi_sub = pre.get("pi_sub") if pre.get("pi_sub") is not None \
        else pi_ty(A_s, B_q, budget)

    diff = depty_diff(ty_subst(pi_AB, sigma), pi_sub)
    if diff is None:
        rep.passed(f"pi.ty-subst{tag}", ANCHOR_PI_LAWS)
    else:
        rep.failed(f"pi.ty-subst{tag}", ANCHOR_PI_LAWS, diff)

    lam_M = lam(M, A, pi=pi_AB)
    diff = term_diff(tm_subst(lam_M, sigma), lam(tm_subst(M, q), A_s, pi=pi_sub))
    if diff is None:
        rep.passed(f"pi.lam-subst{tag}", ANCHOR_PI_LAWS)
    else:
        rep.failed(f"pi.lam-subst{tag}", ANCHOR_PI_LAWS, diff)

    if N is not None:
        lhs = tm_subst(app(lam_M, N, A, B, pi=pi_AB), sigma)
        rhs = app(tm_subst(lam_M, sigma), tm_subst(N, sigma), A_s, B_q, pi=pi_sub)
        diff = term_diff(lhs, rhs)
        if diff is None:
            rep.passed(f"pi.app-subst{tag}", ANCHOR_PI_LAWS)
        else:
            rep.failed(f"pi.app-subst{tag}", ANCHOR_PI_LAWS, diff)

        beta_lhs = app(lam_M, N, A, B, pi=pi_AB)
        beta_rhs = tm_subst(M, ext(nat_id(gamma), A, N))
        diff = term_diff(beta_lhs, beta_rhs)
        if diff is None:
            rep.passed(f"pi.beta{tag}", ANCHOR_PI_BETA)
        else:
            rep.failed(f"pi.beta{tag}", ANCHOR_PI_BETA, diff)

    if N_prime is not None:
        # generalized lemma: uncurrying commutes with pushing the
        # substitution into either the term or the extension
        lhs = tm_subst(lam_inv(lam_M, A, B, pi=pi_AB), ext(sigma, A, N_prime))
        rhs = tm_subst(lam_inv(tm_subst(lam_M, sigma), A_s, B_q, pi=pi_sub),
                       ext(nat_id(delta), A_s, N_prime))
        diff = term_diff(lhs, rhs)
        if diff is None:
            rep.passed(f"pi.app-subst-general{tag}", ANCHOR_PI_LAWS)
        else:
            rep.failed(f"pi.app-subst-general{tag}", ANCHOR_PI_LAWS, diff)
    return rep
