"""Constant presheaves: the necessity modality, telescopes, and letbox.

Fixing every carrier at the terminal world yields an idempotent comonad
on the presheaf category: applying it twice returns the very same tables,
and the counit restricts along the unique arrow into the terminal world.
Boxed types and terms read their data at the terminal world and carry
identity restrictions; the comprehension of boxed data is the box of the
comprehension, as a structural table equality.

Telescopes package an ordered list of types, each over the comprehension
of the previous ones, giving concatenated contexts, iterated weakening,
and the telescope-lifted substitution used by the eliminator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cwf import (
    DepTy,
    Term,
    build_depty,
    build_term,
    comprehension,
    ext,
    proj_p,
    q_morphism,
    tm_subst,
    ty_subst,
    var_v,
)
from .elems import Elem
from .errors import InvalidStructureError, StructuralError
from .fincat import hom_set
from .presheaf import (
    NatTrans,
    Presheaf,
    build_nat,
    elem_morphisms,
    nat_compose,
    nat_id,
    validate_presheaf,
)
from .report import ValidationReport

ANCHOR_BOX = "modality/idempotent-comonad"
ANCHOR_BOX_TYPES = "modality/boxed-types"
ANCHOR_LETBOX = "modality/eliminator"


@dataclass
class Telescope:
    base: Presheaf
    entries: tuple[DepTy, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)


def validate_telescope(tele: Telescope) -> ValidationReport:
    rep = ValidationReport("telescope")
    ctx = tele.base
    for k, entry in enumerate(tele.entries):
        if entry.ctx != ctx:
            rep.add("entry-context-mismatch", index=k)
            return rep
        ctx = comprehension(ctx, entry)
    return rep


def build_telescope(base: Presheaf, entries) -> Telescope:
    tele = Telescope(base, tuple(entries))
    rep = validate_telescope(tele)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return tele


def tele_concat(base: Presheaf, tele: Telescope) -> Presheaf:
    """Concatenated context: fold comprehension over the entries."""
    if tele.base != base:
        raise StructuralError("telescope lives over a different context")
    ctx = base
    for entry in tele.entries:
        ctx = comprehension(ctx, entry)
    return ctx


def tele_weaken(base: Presheaf, tele: Telescope) -> NatTrans:
    """Iterated weakening from the concatenated context back to the base."""
    if tele.base != base:
        raise StructuralError("telescope lives over a different context")
    ctx = base
    w = nat_id(base)
    for entry in tele.entries:
        w = nat_compose(w, proj_p(ctx, entry))
        ctx = comprehension(ctx, entry)
    return w


def tele_subst(sigma: NatTrans, tele: Telescope) -> tuple[Telescope, NatTrans]:
    """Pull a telescope back along a substitution into its base.

    Returns the reindexed telescope together with the lifted substitution
    between the concatenated contexts; defined by mutual recursion, one
    binder at a time.
    """
    if sigma.dst != tele.base:
        raise StructuralError("substitution codomain is not the telescope base")
    if not tele.entries:
        return Telescope(sigma.src, ()), sigma
    prefix = Telescope(tele.base, tele.entries[:-1])
    last = tele.entries[-1]
    prefix_sub, q_prefix = tele_subst(sigma, prefix)
    last_sub = ty_subst(last, q_prefix)
    return (Telescope(sigma.src, prefix_sub.entries + (last_sub,)),
            q_morphism(q_prefix, last))


# --- the constant-presheaf comonad ---

def _check_terminal(base, t: str) -> None:
    for d in base.objects:
        if len(hom_set(base, d, t)) != 1:
            raise StructuralError(
                f"{t!r} is not terminal: hom({d!r}, {t!r}) has "
                f"{len(hom_set(base, d, t))} arrows")


def unique_arrow_into(base, d: str, t: str) -> str:
    return hom_set(base, d, t)[0]


def box_presheaf(ps: Presheaf, t: str) -> Presheaf:
    """Freeze the presheaf at the terminal world: constant carriers,
    identity restrictions."""
    _check_terminal(ps.base, t)
    frozen = ps.elems(t)
    carrier = {d: frozen for d in ps.base.objects}
    action = {(mor, s): s for mor in ps.base.morphisms for s in frozen}
    boxed = Presheaf(ps.base, carrier, action, name=f"box({ps.name})")
    rep = validate_presheaf(boxed)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return boxed


def counit(ps: Presheaf, t: str) -> NatTrans:
    """From the frozen presheaf back into the original: restrict along the
    unique arrow into the terminal world."""
    boxed = box_presheaf(ps, t)
    comps = {
        d: {s: ps.act(unique_arrow_into(ps.base, d, t), s) for s in boxed.elems(d)}
        for d in ps.base.objects
    }
    return build_nat(boxed, ps, comps, name=f"counit({ps.name})")


def box_ty(A: DepTy, t: str) -> DepTy:
    """Boxed type over the boxed context: fibers read at the terminal
    world, identity restrictions."""
    gamma = A.ctx
    boxed_ctx = box_presheaf(gamma, t)
    fiber = {(d, s): A.fiber_at(t, s) for d, s in boxed_ctx.points()}
    action = {}
    for mor, s2 in elem_morphisms(boxed_ctx):
        m = boxed_ctx.base.morphisms[mor]
        for a in fiber[(m.cod, s2)]:
            action[(mor, s2, a)] = a
    return build_depty(boxed_ctx, fiber, action, name=f"box({A.name})")


def box_tm(M: Term, t: str) -> Term:
    """Boxed term: values read at the terminal world."""
    boxed_ty = box_ty(M.ty, t)
    assign = {(d, s): M.at(t, s) for d, s in boxed_ty.ctx.points()}
    return build_term(boxed_ty.ctx, boxed_ty, assign, name=f"box({M.name})")


def box_intro(M: Term, tele: Telescope, t: str) -> Term:
    """Introduce necessity under a telescope: box the term, then weaken it
    across the telescope (using that boxing is idempotent on the context)."""
    ctx = M.ctx
    if box_presheaf(ctx, t) != ctx:
        raise StructuralError("term context is not a boxed context")
    if tele.base != ctx:
        raise StructuralError("telescope does not extend the term context")
    boxed = box_tm(M, t)
    return tm_subst(boxed, tele_weaken(ctx, tele))


def letbox(delta: Presheaf, t: str, A: DepTy, tele: Telescope,
           B: DepTy, M: Term, N: Term) -> Term:
    """Eliminate necessity.

    Inputs (shapes checked structurally, against this module's own
    constructions):
      * ``A`` over the boxed context;
      * ``tele`` a telescope over the boxed context, ``concat`` its
        concatenation with it;
      * ``B`` over ``concat`` extended by the weakened boxed type;
      * ``M`` over ``concat`` of that weakened boxed type;
      * ``N`` over the boxed extended-by-A context concatenated with the
        pulled-back telescope, of ``B`` reindexed by pairing the lifted
        weakening with the top variable.

    The result pointwise feeds M's value into N's extra slot.
    """
    boxed_delta = box_presheaf(delta, t)
    if A.ctx != boxed_delta:
        raise StructuralError("type does not live over the boxed context")
    if tele.base != boxed_delta:
        raise StructuralError("telescope does not live over the boxed context")
    k = len(tele)
    concat = tele_concat(boxed_delta, tele)
    weaken = tele_weaken(boxed_delta, tele)
    boxed_A = box_ty(A, t)
    boxed_A_w = ty_subst(boxed_A, weaken)
    if M.ctx != concat or M.ty != boxed_A_w:
        raise StructuralError(
            "boxed term has shape "
            f"({M.ctx.name}, {M.ty.name}); expected ({concat.name}, {boxed_A_w.name})")
    if B.ctx != comprehension(concat, boxed_A_w):
        raise StructuralError("result type does not live over the extended context")

    # global context extended by A, boxed; equal to the comprehension of
    # the boxed pieces by idempotency
    global_ext = comprehension(boxed_delta, boxed_A)
    if box_presheaf(comprehension(boxed_delta, A), t) != global_ext:
        raise StructuralError("boxed comprehension does not match the "
                              "comprehension of boxed pieces")
    p_global = proj_p(boxed_delta, boxed_A)
    tele_sub, q_p = tele_subst(p_global, tele)
    ctx_N = tele_concat(global_ext, tele_sub)
    weaken_N = tele_weaken(global_ext, tele_sub)
    top_var = tm_subst(var_v(boxed_delta, boxed_A), weaken_N)
    sigma_N = ext(q_p, boxed_A_w, top_var)
    expected_N_ty = ty_subst(B, sigma_N)
    if N.ctx != ctx_N or N.ty != expected_N_ty:
        raise StructuralError(
            "branch term has shape "
            f"({N.ctx.name}, {N.ty.name}); expected ({ctx_N.name}, {expected_N_ty.name})")

    result_ty = ty_subst(B, ext(nat_id(concat), boxed_A_w, M))
    assign: dict[tuple[str, Elem], Elem] = {}
    for d, x in concat.points():
        m_val = M.at(d, x)
        assign[(d, x)] = N.at(d, _graft(x, k, m_val))
    return build_term(concat, result_ty, assign, name="letbox")


def _graft(x: Elem, depth: int, extra: Elem) -> Elem:
    """Pair the bottom of a nested comprehension element with an extra
    value, keeping the telescope layers above unchanged."""
    if depth == 0:
        return (x, extra)
    return (_graft(x[0], depth - 1, extra), x[1])
