"""Three-object poset base: composition is non-trivial everywhere here,
so these runs exercise the composite paths the two-object fixtures miss."""

import pytest

from cwf_lab import fixtures
from cwf_lab.cwf import (
    comprehension,
    enumerate_terms,
    law_suite_cwf,
    term_equal,
    ty_subst,
    validate_depty,
)
from cwf_lab.fincat import chain
from cwf_lab.modality import box_presheaf, box_ty, counit
from cwf_lab.pi import anchored_fiber_oracle, lam, lam_inv, pi_ty
from cwf_lab.presheaf import (
    build_presheaf,
    enumerate_nats,
    terminal_presheaf,
    validate_nat,
)


@pytest.fixture(scope="module")
def chain_ps():
    c3 = chain(2)
    return build_presheaf(
        c3,
        carrier={"0": ("a0", "a1"), "1": ("b0",), "2": ("c0", "c1")},
        action={
            ("le_0_0", "a0"): "a0", ("le_0_0", "a1"): "a1",
            ("le_1_1", "b0"): "b0",
            ("le_2_2", "c0"): "c0", ("le_2_2", "c1"): "c1",
            ("le_0_1", "b0"): "a1",
            ("le_1_2", "c0"): "b0", ("le_1_2", "c1"): "b0",
            ("le_0_2", "c0"): "a1", ("le_0_2", "c1"): "a1",
        }, name="chainPS")


@pytest.fixture(scope="module")
def chain_types(chain_ps):
    return fixtures.enumerate_deptys(chain_ps, max_fiber=2)


def test_type_enumeration_respects_composition(chain_ps, chain_types):
    assert len(chain_types) == 384
    for A in chain_types[::48]:
        assert validate_depty(A).ok


def test_comprehension_laws_over_chain(chain_ps, chain_types):
    top = terminal_presheaf(chain_ps.base)
    families = 0
    for A in chain_types[:12]:
        extended = comprehension(chain_ps, A)
        for sigma in enumerate_nats(top, chain_ps):
            A_s = ty_subst(A, sigma)
            for M in enumerate_terms(A_s):
                for sp in enumerate_nats(top, extended):
                    assert law_suite_cwf(chain_ps, top, A, sigma, M, sp).ok
                    families += 1
    assert families > 0


def test_pi_iso_over_chain(chain_ps, chain_types):
    A = chain_types[5]
    B = fixtures.constant_depty(comprehension(chain_ps, A), ("u", "v"), name="B")
    P = pi_ty(A, B)
    assert validate_depty(P).ok
    curried = enumerate_terms(B)
    assert len(curried) == len(enumerate_terms(P))
    for M in curried:
        assert term_equal(lam_inv(lam(M, A, pi=P), A, B, pi=P), M)
    for psi, s in chain_ps.points():
        assert anchored_fiber_oracle(A, B, psi, s) == set(P.fiber_at(psi, s))


def test_modality_over_chain(chain_ps, chain_types):
    boxed = box_presheaf(chain_ps, "2")
    assert box_presheaf(boxed, "2") == boxed
    assert validate_nat(counit(chain_ps, "2")).ok
    A = chain_types[5]
    assert comprehension(boxed, box_ty(A, "2")) == \
        box_presheaf(comprehension(chain_ps, A), "2")
