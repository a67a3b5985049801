"""Constant presheaves: comonad structure, boxed data, telescopes, letbox."""

import pytest

from cwf_lab.cwf import (
    comprehension,
    enumerate_terms,
    ext,
    proj_p,
    term_equal,
    tm_subst,
    ty_subst,
    validate_term,
    var_v,
)
from cwf_lab.errors import StructuralError
from cwf_lab.fixtures import constant_depty
from cwf_lab.modality import (
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
    unique_arrow_into,
)
from cwf_lab.presheaf import (
    nat_equal,
    nat_id,
    validate_nat,
    validate_presheaf,
)


@pytest.fixture
def boxed_g2(g2):
    return box_presheaf(g2, "b")


def test_box_of_terminal_is_terminal(top2):
    assert box_presheaf(top2, "b") == top2


def test_box_gamma2_carriers(g2, boxed_g2):
    assert boxed_g2.carrier == {"a": ("x",), "b": ("x",)}
    assert validate_presheaf(boxed_g2).ok


def test_box_requires_terminal_object(g2):
    with pytest.raises(StructuralError):
        box_presheaf(g2, "a")  # two arrows a -> a? no: hom(b, a) is empty


def test_box_idempotent(g2, boxed_g2):
    assert box_presheaf(boxed_g2, "b") == boxed_g2


def test_counit_components(g2):
    eps = counit(g2, "b")
    assert eps.at("a", "x") == "0"  # restriction along the unique arrow
    assert eps.at("b", "x") == "x"
    assert validate_nat(eps).ok


def test_counit_on_terminal_is_identity_shaped(top2):
    eps = counit(top2, "b")
    assert eps.components == nat_id(top2).components


def test_counit_identity_on_constant_presheaves(boxed_g2):
    eps = counit(boxed_g2, "b")
    assert eps.components == nat_id(boxed_g2).components


def test_box_ty_fibers_and_equation(g2, a2):
    bA = box_ty(a2, "b")
    assert all(f == ("u",) for f in bA.fiber.values())
    lhs = comprehension(box_presheaf(g2, "b"), bA)
    rhs = box_presheaf(comprehension(g2, a2), "b")
    assert lhs == rhs


def test_box_ty_tm_invariant_under_second_application(g2, a2):
    bG = box_presheaf(g2, "b")
    bA = box_ty(a2, "b")
    # boxing the boxed type again returns the same tables
    assert box_ty(bA, "b") == bA
    (M,) = enumerate_terms(a2)
    bM = box_tm(M, "b")
    assert box_tm(bM, "b") == bM


def test_box_tm_is_constant_family(g2, a2):
    (M,) = enumerate_terms(a2)
    bM = box_tm(M, "b")
    assert set(bM.assign.values()) == {"u"}
    assert validate_term(bM).ok


# --- telescopes ---

def test_empty_telescope_concat_is_base(boxed_g2):
    t = build_telescope(boxed_g2, [])
    assert tele_concat(boxed_g2, t) == boxed_g2
    assert nat_equal(tele_weaken(boxed_g2, t), nat_id(boxed_g2))


def test_single_entry_concat_is_comprehension(g2, a2):
    t = build_telescope(g2, [a2])
    assert tele_concat(g2, t) == comprehension(g2, a2)
    assert nat_equal(tele_weaken(g2, t), proj_p(g2, a2))


def test_two_entry_concat_counts(g2, a2):
    ga = comprehension(g2, a2)
    second = constant_depty(ga, ("m0", "m1"), name="M2")
    t = build_telescope(g2, [a2, second])
    cc = tele_concat(g2, t)
    for d in g2.base.objects:
        assert len(cc.elems(d)) == sum(
            len(second.fiber_at(d, s)) for s in ga.elems(d))
    w = tele_weaken(g2, t)
    assert validate_nat(w).ok
    assert w.src == cc and w.dst == g2


def test_telescope_rejects_wrong_chaining(g2, a2):
    with pytest.raises(Exception):
        build_telescope(g2, [a2, a2])  # second entry lives over g2, not g2.A2


def test_tele_subst_empty(g2, sigma2):
    tele, q = tele_subst(sigma2, Telescope(g2, ()))
    assert len(tele) == 0 and nat_equal(q, sigma2)


def test_tele_subst_single_is_q(g2, a2, sigma2):
    from cwf_lab.cwf import q_morphism
    tele, q = tele_subst(sigma2, Telescope(g2, (a2,)))
    assert len(tele) == 1
    assert nat_equal(q, q_morphism(sigma2, a2))


def test_tele_subst_two_entries_pointwise(g2, a2, sigma2):
    ga = comprehension(g2, a2)
    second = constant_depty(ga, ("m0", "m1"), name="M2")
    tele, q = tele_subst(sigma2, Telescope(g2, (a2, second)))
    assert validate_nat(q).ok
    # pointwise: the substituted coordinate changes, telescope data rides
    for d in q.src.base.objects:
        for ((s, a), m) in q.src.elems(d):
            assert q.at(d, ((s, a), m)) == ((sigma2.at(d, s), a), m)


# --- introduction and elimination ---

def test_box_intro_empty_telescope_is_box(g2, a2):
    bG = box_presheaf(g2, "b")
    A = constant_depty(bG, ("a0", "a1"), name="A")
    for M in enumerate_terms(A):
        out = box_intro(M, Telescope(bG, ()), "b")
        assert term_equal(out, box_tm(M, "b"))


def test_box_intro_one_entry(g2, a2):
    bG = box_presheaf(g2, "b")
    A = constant_depty(bG, ("a0", "a1"), name="A")
    K = constant_depty(bG, ("c0", "c1"), name="K")
    tele = build_telescope(bG, [K])
    for M in enumerate_terms(A):
        out = box_intro(M, tele, "b")
        assert validate_term(out).ok
        # weakened constant family: same boxed value at every extension
        for (d, (s, c)), val in out.assign.items():
            assert val == M.at("b", s)


def test_box_intro_rejects_unboxed_context(g2):
    A = constant_depty(g2, ("a0",), name="A")
    (M,) = enumerate_terms(A)
    with pytest.raises(StructuralError):
        box_intro(M, Telescope(g2, ()), "b")


def _letbox_setup(g2, entries=("c0", "c1"), a_fibers=("a0",), b_fibers=("r0", "r1")):
    bd = box_presheaf(g2, "b")
    A = constant_depty(bd, a_fibers, name="A")
    tele = build_telescope(bd, [constant_depty(bd, entries, name="K")]) \
        if entries else build_telescope(bd, [])
    concat = tele_concat(bd, tele)
    w = tele_weaken(bd, tele)
    bA = box_ty(A, "b")
    bAw = ty_subst(bA, w)
    B = constant_depty(comprehension(concat, bAw), b_fibers, name="B")
    ge = comprehension(bd, bA)
    pg = proj_p(bd, bA)
    tele_sub, qp = tele_subst(pg, tele)
    ctxN = tele_concat(ge, tele_sub)
    wN = tele_weaken(ge, tele_sub)
    tv = tm_subst(var_v(bd, bA), wN)
    sigN = ext(qp, bAw, tv)
    NT = ty_subst(B, sigN)
    return bd, A, tele, concat, bAw, B, NT


def test_letbox_all_wellshaped_inputs_validate(g2):
    bd, A, tele, concat, bAw, B, NT = _letbox_setup(g2)
    k = len(tele)
    for M in enumerate_terms(bAw):
        for N in enumerate_terms(NT):
            out = letbox(g2, "b", A, tele, B, M, N)
            assert validate_term(out).ok
            # pointwise: feed M's value into the branch's extra slot
            for (d, x) in concat.points():
                grafted = ((x[0], M.at(d, x)), x[1])
                assert out.at(d, x) == N.at(d, grafted)


def test_letbox_degenerate_singletons(top2):
    # empty telescope over the terminal context with a singleton type:
    # the eliminator returns the branch reindexed along the induced map
    bd = box_presheaf(top2, "b")
    A = constant_depty(bd, ("a0",), name="A")
    tele = Telescope(bd, ())
    concat = tele_concat(bd, tele)
    bAw = ty_subst(box_ty(A, "b"), tele_weaken(bd, tele))
    B = constant_depty(comprehension(concat, bAw), ("r0", "r1"), name="B")
    ge = comprehension(bd, box_ty(A, "b"))
    sigN = ext(tele_subst(proj_p(bd, box_ty(A, "b")), tele)[1], bAw,
               tm_subst(var_v(bd, box_ty(A, "b")),
                        tele_weaken(ge, Telescope(ge, ()))))
    NT = ty_subst(B, sigN)
    (M,) = enumerate_terms(bAw)
    for N in enumerate_terms(NT):
        out = letbox(top2, "b", A, tele, B, M, N)
        induced = ext(nat_id(concat), bAw, M)
        # here the branch context is exactly the comprehension, so the
        # eliminator is the branch pulled back along <id, M>
        assert term_equal(out, tm_subst(N, induced))


def test_letbox_smoke_with_box_intro(g2):
    """Feeding a boxed value into the eliminator returns the branch with
    that value substituted, on singleton carriers."""
    bd, A, tele, concat, bAw, B, NT = _letbox_setup(
        g2, entries=("c0",), a_fibers=("a0",), b_fibers=("r0", "r1"))
    (u_term,) = enumerate_terms(constant_depty(bd, ("a0",), name="A"))
    M = box_intro(u_term, tele, "b")
    assert M.ty == bAw
    for N in enumerate_terms(NT):
        out = letbox(g2, "b", A, tele, B, M, N)
        for (d, x) in concat.points():
            assert out.at(d, x) == N.at(d, ((x[0], u_term.at("b", x[0])), x[1]))


def test_letbox_rejects_misshapen_branch(g2):
    bd, A, tele, concat, bAw, B, NT = _letbox_setup(g2)
    M = enumerate_terms(bAw)[0]
    wrong_N = enumerate_terms(bAw)[0]  # lives over concat, not the branch context
    with pytest.raises(StructuralError):
        letbox(g2, "b", A, tele, B, M, wrong_N)


def test_unique_arrow_lookup(c2):
    assert unique_arrow_into(c2, "a", "b") == "f"
    assert unique_arrow_into(c2, "b", "b") == "id_b"
