"""Category tables: validation, composition, hom sets, builders."""

import pytest

from cwf_lab.errors import CapacityError, StructuralError
from cwf_lab.fincat import (
    FinCat,
    Mor,
    chain,
    compose,
    hom_set,
    terminal_category,
    validate_category,
    walking_arrow,
)


def test_terminal_category_shape():
    c = terminal_category()
    assert len(c.objects) == 1
    assert len(c.morphisms) == 1
    assert validate_category(c).ok


def test_walking_arrow_validates_and_matches_hand_enumeration(c2):
    assert validate_category(c2).ok
    # independent hand check of all three morphisms
    assert set(c2.morphisms) == {"id_a", "id_b", "f"}
    assert c2.morphisms["f"].dom == "a" and c2.morphisms["f"].cod == "b"
    for m in c2.morphisms.values():
        assert c2.composition[(m.name, c2.identity[m.dom])] == m.name
        assert c2.composition[(c2.identity[m.cod], m.name)] == m.name


def test_broken_right_identity_is_reported(c2):
    bad_comp = dict(c2.composition)
    bad_comp[("f", "id_a")] = "id_a"
    bad = FinCat(c2.objects, c2.morphisms, c2.identity, bad_comp)
    rep = validate_category(bad)
    assert not rep.ok
    assert any(v.law == "right-identity" and v.witness["mor"] == "f"
               for v in rep.violations)


def test_compose_identity_laws(c2):
    assert compose(c2, "f", "id_a") == "f"
    assert compose(c2, "id_b", "f") == "f"


def test_compose_in_chain_two():
    c = chain(2)
    (g,) = hom_set(c, "1", "2")
    (f,) = hom_set(c, "0", "1")
    # the poset has exactly one arrow 0 -> 2, so the composite is forced
    (expected,) = hom_set(c, "0", "2")
    assert compose(c, g, f) == expected


def test_compose_rejects_non_composable(c2):
    with pytest.raises(StructuralError):
        compose(c2, "f", "id_b")


def test_hom_sets_by_enumeration(c2, c1):
    assert hom_set(c2, "a", "b") == ("f",)
    assert hom_set(c2, "b", "a") == ()
    assert hom_set(c1, "o", "o") == ("id_o",)
    with pytest.raises(StructuralError):
        hom_set(c2, "a", "zz")


@pytest.mark.parametrize("cat_fn,objects,morphisms", [
    (terminal_category, 1, 1),
    (walking_arrow, 2, 3),
    (lambda: chain(2), 3, 6),  # hom count of a poset: pairs i <= j
])
def test_builder_counts(cat_fn, objects, morphisms):
    c = cat_fn()
    assert len(c.objects) == objects
    assert len(c.morphisms) == morphisms


def test_chain_over_fuel_is_capacity_error():
    with pytest.raises(CapacityError):
        chain(10, fuel=5)


@pytest.mark.parametrize("cat_fn", [terminal_category, walking_arrow,
                                    lambda: chain(2), lambda: chain(3)])
def test_laws_hold_exhaustively(cat_fn):
    c = cat_fn()
    assert validate_category(c).ok
    for g, f in c.composable_pairs():
        gf = c.composition[(g, f)]
        mg, mf = c.morphisms[g], c.morphisms[f]
        assert c.morphisms[gf].dom == mf.dom and c.morphisms[gf].cod == mg.cod
        for h in c.morphisms.values():
            if h.dom != mg.cod:
                continue
            assert (c.composition[(h.name, gf)]
                    == c.composition[(c.composition[(h.name, g)], f)])


@pytest.mark.parametrize("cat_fn", [terminal_category, walking_arrow,
                                    lambda: chain(2)])
def test_hom_sets_partition_morphisms(cat_fn):
    c = cat_fn()
    total = sum(len(hom_set(c, d, d2)) for d in c.objects for d2 in c.objects)
    assert total == len(c.morphisms)


def test_missing_composition_entry_is_reported():
    mors = {"id_a": Mor("id_a", "a", "a")}
    bad = FinCat(("a",), mors, {"a": "id_a"}, {})
    rep = validate_category(bad)
    assert any(v.law == "composition-missing" for v in rep.violations)
