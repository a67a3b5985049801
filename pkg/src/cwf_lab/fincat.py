"""Finite categories as validated tables.

A category is given completely by tables: objects, morphisms with their
endpoints, an identity assignment, and a composition table that must be
total exactly on composable pairs.  `validate_category` checks the
category laws exhaustively and reports every violation with witnesses.

Storage convention used package-wide: morphisms are stored in base
direction dom -> cod.  Whenever a construction consumes an arrow of the
opposite category (as contravariant actions do), it takes the stored
arrow and applies the flip at the use site; no opposite category is ever
materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import CapacityError, InvalidStructureError, StructuralError
from .report import ValidationReport

DEFAULT_FUEL = 64


@dataclass(frozen=True)
class Mor:
    name: str
    dom: str
    cod: str


@dataclass
class FinCat:
    objects: tuple[str, ...]
    morphisms: dict[str, Mor]
    identity: dict[str, str]                    # obj -> morphism name
    composition: dict[tuple[str, str], str]     # (g, f) with cod(f)=dom(g) -> name
    name: str = field(default="", compare=False)

    def mor(self, name: str) -> Mor:
        try:
            return self.morphisms[name]
        except KeyError:
            raise StructuralError(f"unknown morphism {name!r}") from None

    def id_of(self, obj: str) -> str:
        try:
            return self.identity[obj]
        except KeyError:
            raise StructuralError(f"unknown object {obj!r}") from None

    def composable_pairs(self):
        """All (g, f) with cod(f) = dom(g), in deterministic order."""
        mors = sorted(self.morphisms)
        for g, f in product(mors, mors):
            if self.morphisms[f].cod == self.morphisms[g].dom:
                yield g, f


def compose(cat: FinCat, g: str, f: str) -> str:
    """Composite g after f, read from the table."""
    mg, mf = cat.mor(g), cat.mor(f)
    if mf.cod != mg.dom:
        raise StructuralError(
            f"cannot compose {g!r} after {f!r}: "
            f"cod({f!r}) = {mf.cod!r} but dom({g!r}) = {mg.dom!r}")
    try:
        return cat.composition[(g, f)]
    except KeyError:
        raise StructuralError(f"composition table missing entry ({g!r}, {f!r})") from None


def hom_set(cat: FinCat, d: str, d2: str) -> tuple[str, ...]:
    """All morphisms d -> d2, sorted by name."""
    if d not in cat.objects:
        raise StructuralError(f"unknown object {d!r}")
    if d2 not in cat.objects:
        raise StructuralError(f"unknown object {d2!r}")
    return tuple(sorted(
        m.name for m in cat.morphisms.values() if m.dom == d and m.cod == d2))


def validate_category(cat: FinCat) -> ValidationReport:
    rep = ValidationReport(f"category {cat.name or '<unnamed>'}")
    for m in cat.morphisms.values():
        if m.dom not in cat.objects:
            rep.add("morphism-endpoints", mor=m.name, missing=m.dom)
        if m.cod not in cat.objects:
            rep.add("morphism-endpoints", mor=m.name, missing=m.cod)
    for obj in cat.objects:
        i = cat.identity.get(obj)
        if i is None or i not in cat.morphisms:
            rep.add("identity-missing", obj=obj)
            continue
        m = cat.morphisms[i]
        if m.dom != obj or m.cod != obj:
            rep.add("identity-endpoints", obj=obj, mor=i, dom=m.dom, cod=m.cod)
    if not rep.ok:
        return rep

    composable = set(cat.composable_pairs())
    for key in cat.composition:
        if key not in composable:
            rep.add("composition-spurious", g=key[0], f=key[1])
    for g, f in sorted(composable):
        res = cat.composition.get((g, f))
        if res is None:
            rep.add("composition-missing", g=g, f=f)
            continue
        if res not in cat.morphisms:
            rep.add("composition-unknown-result", g=g, f=f, result=res)
            continue
        mr, mg, mf = cat.morphisms[res], cat.morphisms[g], cat.morphisms[f]
        if mr.dom != mf.dom or mr.cod != mg.cod:
            rep.add("composition-endpoints", g=g, f=f, result=res)

    # law checks still run over whatever entries exist, so a mistyped
    # table also surfaces the equations it breaks
    for m in sorted(cat.morphisms):
        mor = cat.morphisms[m]
        right = cat.composition.get((m, cat.identity[mor.dom]))
        if right is not None and right != m:
            rep.add("right-identity", mor=m, got=right)
        left = cat.composition.get((cat.identity[mor.cod], m))
        if left is not None and left != m:
            rep.add("left-identity", mor=m, got=left)

    mors = sorted(cat.morphisms)
    for h, g, f in product(mors, mors, mors):
        mh, mg, mf = cat.morphisms[h], cat.morphisms[g], cat.morphisms[f]
        if mf.cod != mg.dom or mg.cod != mh.dom:
            continue
        gf, hg = cat.composition.get((g, f)), cat.composition.get((h, g))
        left = cat.composition.get((h, gf)) if gf is not None else None
        right = cat.composition.get((hg, f)) if hg is not None else None
        if left is not None and right is not None and left != right:
            rep.add("associativity", h=h, g=g, f=f, left=left, right=right)
    return rep


def build_category(objects, morphisms, identity, composition, name="") -> FinCat:
    """Checked constructor: validates and raises on any law violation."""
    cat = FinCat(tuple(objects), dict(morphisms), dict(identity),
                 dict(composition), name=name)
    rep = validate_category(cat)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return cat


# --- canonical builders, used as fixtures throughout ---

def terminal_category() -> FinCat:
    """One object, one (identity) morphism."""
    return build_category(
        objects=["o"],
        morphisms={"id_o": Mor("id_o", "o", "o")},
        identity={"o": "id_o"},
        composition={("id_o", "id_o"): "id_o"},
        name="C1",
    )


def walking_arrow() -> FinCat:
    """Two objects a, b and a single non-identity arrow f: a -> b."""
    mors = {
        "id_a": Mor("id_a", "a", "a"),
        "id_b": Mor("id_b", "b", "b"),
        "f": Mor("f", "a", "b"),
    }
    comp = {
        ("id_a", "id_a"): "id_a",
        ("id_b", "id_b"): "id_b",
        ("f", "id_a"): "f",
        ("id_b", "f"): "f",
    }
    return build_category(["a", "b"], mors, {"a": "id_a", "b": "id_b"}, comp,
                          name="C2")


def chain(n: int, fuel: int = DEFAULT_FUEL) -> FinCat:
    """The poset 0 -> 1 -> ... -> n with one arrow i -> j for each i <= j."""
    if n < 0:
        raise StructuralError("chain length must be non-negative")
    if n > fuel:
        raise CapacityError(f"chain({n}) exceeds fuel {fuel}")
    objects = [str(i) for i in range(n + 1)]
    mors = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            name = f"le_{i}_{j}"
            mors[name] = Mor(name, str(i), str(j))
    identity = {str(i): f"le_{i}_{i}" for i in range(n + 1)}
    comp = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                comp[(f"le_{j}_{k}", f"le_{i}_{j}")] = f"le_{i}_{k}"
    return build_category(objects, mors, identity, comp, name=f"chain{n}")
