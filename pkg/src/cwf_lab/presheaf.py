"""Tabulated presheaves over a finite base category.

A presheaf assigns a finite carrier set to every object and a restriction
function to every morphism, contravariantly: for a stored arrow
``d -> d2`` the action maps ``carrier(d2)`` into ``carrier(d)``.  Natural
transformations are componentwise functions subject to the usual square.

The category of elements of a presheaf is materialized as a genuine
`FinCat` whose objects are the pairs ``(d, s)``; semantic types later in
the package are presheaves over it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .elems import Elem, elem_sort_key, sort_elems
from .errors import InvalidStructureError, StructuralError
from .fincat import FinCat, Mor
from .report import ValidationReport
from .search import forced_search

STAR = "*"


@dataclass
class Presheaf:
    base: FinCat
    carrier: dict[str, tuple[Elem, ...]]
    action: dict[tuple[str, Elem], Elem]   # (mor d->d2, elem of carrier(d2)) -> carrier(d)
    name: str = field(default="", compare=False)

    def elems(self, obj: str) -> tuple[Elem, ...]:
        try:
            return self.carrier[obj]
        except KeyError:
            raise StructuralError(f"presheaf has no carrier at {obj!r}") from None

    def act(self, mor: str, elem: Elem) -> Elem:
        try:
            return self.action[(mor, elem)]
        except KeyError:
            raise StructuralError(
                f"presheaf action missing entry ({mor!r}, {elem!r})") from None

    def points(self):
        """All pairs (d, s) with s in carrier(d): the category-of-elements objects."""
        for obj in self.base.objects:
            for s in self.carrier.get(obj, ()):
                yield obj, s


@dataclass
class NatTrans:
    src: Presheaf
    dst: Presheaf
    components: dict[str, dict[Elem, Elem]]
    name: str = field(default="", compare=False)

    def at(self, obj: str, elem: Elem) -> Elem:
        try:
            return self.components[obj][elem]
        except KeyError:
            raise StructuralError(
                f"transformation has no value at ({obj!r}, {elem!r})") from None


@dataclass
class ElemCat:
    """Category of elements: a FinCat plus labels back to (obj, elem) pairs."""
    cat: FinCat
    labels: dict[str, tuple[str, Elem]]     # elemcat object -> (d, s)
    embed: dict[str, str]                   # elemcat morphism -> base morphism
    obj_names: dict[tuple[str, Elem], str] = field(default_factory=dict)

    def object_for(self, d: str, s: Elem) -> str:
        try:
            return self.obj_names[(d, s)]
        except KeyError:
            raise StructuralError(f"({d!r}, {s!r}) is not an element point") from None


def validate_presheaf(ps: Presheaf) -> ValidationReport:
    rep = ValidationReport(f"presheaf {ps.name or '<unnamed>'}")
    for obj in ps.base.objects:
        if obj not in ps.carrier:
            rep.add("carrier-missing", obj=obj)
    for obj in ps.carrier:
        if obj not in ps.base.objects:
            rep.add("carrier-spurious", obj=obj)
    if not rep.ok:
        return rep

    for mor in sorted(ps.base.morphisms):
        m = ps.base.morphisms[mor]
        for s in ps.carrier[m.cod]:
            if (mor, s) not in ps.action:
                rep.add("action-missing", mor=mor, elem=repr(s))
            elif ps.action[(mor, s)] not in ps.carrier[m.dom]:
                rep.add("action-escapes-carrier", mor=mor, elem=repr(s),
                        result=repr(ps.action[(mor, s)]))
    if not rep.ok:
        return rep

    for obj in ps.base.objects:
        i = ps.base.identity[obj]
        for s in ps.carrier[obj]:
            if ps.action[(i, s)] != s:
                rep.add("identity-action", obj=obj, elem=repr(s),
                        got=repr(ps.action[(i, s)]))
    # contravariance: restricting along g then f equals restricting along g∘f
    for g, f in ps.base.composable_pairs():
        gf = ps.base.composition[(g, f)]
        for s in ps.carrier[ps.base.morphisms[g].cod]:
            seq = ps.action[(f, ps.action[(g, s)])]
            direct = ps.action[(gf, s)]
            if seq != direct:
                rep.add("composition-action", g=g, f=f, elem=repr(s),
                        sequential=repr(seq), composite=repr(direct))
    return rep


def build_presheaf(base: FinCat, carrier, action, name="") -> Presheaf:
    norm = {obj: sort_elems(elems) for obj, elems in carrier.items()}
    ps = Presheaf(base, norm, dict(action), name=name)
    rep = validate_presheaf(ps)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return ps


def terminal_presheaf(base: FinCat) -> Presheaf:
    """Singleton carrier everywhere; every action fixes the point."""
    carrier = {obj: (STAR,) for obj in base.objects}
    action = {(mor, STAR): STAR for mor in base.morphisms}
    return Presheaf(base, carrier, action, name="terminal")


def validate_nat(nt: NatTrans) -> ValidationReport:
    rep = ValidationReport(f"transformation {nt.name or '<unnamed>'}")
    if nt.src.base is not nt.dst.base and nt.src.base != nt.dst.base:
        rep.add("base-mismatch")
        return rep
    base = nt.src.base
    for obj in base.objects:
        comp = nt.components.get(obj)
        if comp is None:
            rep.add("component-missing", obj=obj)
            continue
        for s in nt.src.elems(obj):
            if s not in comp:
                rep.add("component-partial", obj=obj, elem=repr(s))
            elif comp[s] not in nt.dst.elems(obj):
                rep.add("component-escapes", obj=obj, elem=repr(s),
                        result=repr(comp[s]))
    if not rep.ok:
        return rep
    for mor in sorted(base.morphisms):
        m = base.morphisms[mor]
        for s in nt.src.elems(m.cod):
            lhs = nt.dst.act(mor, nt.components[m.cod][s])
            rhs = nt.components[m.dom][nt.src.act(mor, s)]
            if lhs != rhs:
                rep.add("naturality", mor=mor, elem=repr(s),
                        restricted_then_mapped=repr(rhs), mapped_then_restricted=repr(lhs))
    return rep


def build_nat(src: Presheaf, dst: Presheaf, components, name="") -> NatTrans:
    nt = NatTrans(src, dst, {o: dict(c) for o, c in components.items()}, name=name)
    rep = validate_nat(nt)
    if not rep.ok:
        raise InvalidStructureError(rep)
    return nt


def bang(ps: Presheaf) -> NatTrans:
    """The unique morphism into the terminal presheaf."""
    top = terminal_presheaf(ps.base)
    comps = {obj: {s: STAR for s in ps.elems(obj)} for obj in ps.base.objects}
    return NatTrans(ps, top, comps, name=f"!({ps.name})")


def nat_id(ps: Presheaf) -> NatTrans:
    comps = {obj: {s: s for s in ps.elems(obj)} for obj in ps.base.objects}
    return NatTrans(ps, ps, comps, name=f"id({ps.name})")


def nat_compose(second: NatTrans, first: NatTrans) -> NatTrans:
    """Composite `second after first`; endpoints must meet."""
    if first.dst != second.src:
        raise StructuralError("transformation endpoints do not meet")
    comps = {
        obj: {s: second.at(obj, first.at(obj, s)) for s in first.src.elems(obj)}
        for obj in first.src.base.objects
    }
    return NatTrans(first.src, second.dst, comps,
                    name=f"{second.name}∘{first.name}")


def presheaf_equal(a: Presheaf, b: Presheaf) -> bool:
    return a == b


def nat_equal(a: NatTrans, b: NatTrans) -> bool:
    return a == b


def elem_point_name(d: str, s: Elem) -> str:
    return f"{d}|{elem_sort_key(s)}"


def elem_mor_name(mor: str, s2: Elem) -> str:
    return f"{mor}|{elem_sort_key(s2)}"


def category_of_elements(ps: Presheaf) -> ElemCat:
    """Objects are the pairs (d, s); each base arrow d -> d2 contributes one
    morphism into (d2, s2) from (d, restriction of s2)."""
    objects, labels, obj_names = [], {}, {}
    for d, s in ps.points():
        oname = elem_point_name(d, s)
        objects.append(oname)
        labels[oname] = (d, s)
        obj_names[(d, s)] = oname

    mors: dict[str, Mor] = {}
    embed: dict[str, str] = {}
    identity: dict[str, str] = {}
    for mor in sorted(ps.base.morphisms):
        m = ps.base.morphisms[mor]
        for s2 in ps.elems(m.cod):
            mname = elem_mor_name(mor, s2)
            src = obj_names[(m.dom, ps.act(mor, s2))]
            dst = obj_names[(m.cod, s2)]
            mors[mname] = Mor(mname, src, dst)
            embed[mname] = mor
            if m.name == ps.base.identity[m.cod]:
                identity[dst] = mname

    comp: dict[tuple[str, str], str] = {}
    for gname, g in mors.items():
        for fname, f in mors.items():
            if f.cod != g.dom:
                continue
            base_g, base_f = embed[gname], embed[fname]
            base_gf = ps.base.composition[(base_g, base_f)]
            s2 = labels[g.cod][1]
            comp[(gname, fname)] = elem_mor_name(base_gf, s2)
    cat = FinCat(tuple(objects), mors, identity, comp,
                 name=f"elems({ps.name})")
    return ElemCat(cat, labels, embed, obj_names)


def extend_to_elements(ps: Presheaf, mor: str, s2: Elem):
    """Lift a base arrow d -> d2 and a target element to the element pair
    morphism ((d, s2 restricted), (d2, s2)); returns ((d, s), (d2, s2), mor)."""
    m = ps.base.mor(mor)
    if s2 not in ps.elems(m.cod):
        raise StructuralError(f"{s2!r} is not in the carrier at {m.cod!r}")
    return (m.dom, ps.act(mor, s2)), (m.cod, s2), mor


def elem_morphisms(ps: Presheaf):
    """All element-category morphisms as (mor, s2) with s2 in carrier(cod)."""
    for mor in sorted(ps.base.morphisms):
        m = ps.base.morphisms[mor]
        for s2 in ps.elems(m.cod):
            yield mor, s2


def enumerate_nats(src: Presheaf, dst: Presheaf) -> list[NatTrans]:
    """Every natural transformation src => dst, by exhaustive search with
    forcing along the naturality squares."""
    if src.base != dst.base:
        raise StructuralError("presheaves live over different bases")
    base = src.base
    order = sorted(src.points(), key=lambda p: (p[0], elem_sort_key(p[1])))
    # the value at (cod, s2) forces the value at (dom, s2 restricted)
    forcings: dict = {p: [] for p in order}
    for mor, s2 in elem_morphisms(src):
        m = base.morphisms[mor]
        forcings[(m.cod, s2)].append(
            ((m.dom, src.act(mor, s2)),
             (lambda v, _mor=mor: dst.act(_mor, v))))

    results = []
    for chosen in forced_search(order, lambda p: dst.elems(p[0]), forcings):
        comps: dict[str, dict[Elem, Elem]] = {o: {} for o in base.objects}
        for (d, s), v in chosen.items():
            comps[d][s] = v
        results.append(NatTrans(src, dst, comps))
    results.sort(key=lambda nt: elem_sort_key(
        tuple((o, tuple(sorted(((elem_sort_key(k), elem_sort_key(v))
                                 for k, v in nt.components[o].items()))))
              for o in base.objects)))
    return results
