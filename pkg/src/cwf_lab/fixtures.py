"""Named fixtures and bounded exhaustive enumerators.

The registry is the desk-scale model zoo every suite runs over:

  C1  -- the one-object category
  C2  -- the walking arrow a -> b
  T1/T2 -- terminal presheaves over C1/C2
  P3  -- a three-element presheaf over C1
  G2  -- presheaf over C2: carrier a:{0,1}, b:{x}, restriction along f
         sending x to 0
  A2  -- type over G2 with fibers (a,0):{p,q}, (a,1):{r}, (b,x):{u} and
         restriction sending u to p
  A2p -- A2 weakened to the extended context G2.A2
  sigma2 -- the point substitution T2 => G2 picking 0 at a and x at b

Base-CwF fixtures (unit_cwf, unit_cwf_with_pi, renaming_cwf) live here
too; the renaming model is the smallest one where projection, variable
and extension are all non-degenerate.
"""

from __future__ import annotations

from itertools import product

from .cwf import DepTy, build_depty, comprehension, proj_p, ty_subst, validate_depty
from .elems import Elem, elem_sort_key, sort_elems
from .errors import CapacityError
from .fincat import FinCat, Mor, build_category, terminal_category, walking_arrow
from .internal import BaseCwF, PiTables, build_base_cwf
from .presheaf import (
    NatTrans,
    Presheaf,
    build_nat,
    build_presheaf,
    elem_morphisms,
    terminal_presheaf,
)

DEFAULT_BOUNDS = {"max_objects": 3, "max_fiber": 3}


def c1() -> FinCat:
    return terminal_category()


def c2() -> FinCat:
    return walking_arrow()


def gamma2() -> Presheaf:
    cat = c2()
    return build_presheaf(
        cat,
        carrier={"a": ("0", "1"), "b": ("x",)},
        action={
            ("id_a", "0"): "0", ("id_a", "1"): "1",
            ("id_b", "x"): "x",
            ("f", "x"): "0",
        },
        name="G2",
    )


def a2(g2: Presheaf | None = None) -> DepTy:
    g2 = g2 or gamma2()
    fiber = {
        ("a", "0"): ("p", "q"),
        ("a", "1"): ("r",),
        ("b", "x"): ("u",),
    }
    action = {
        ("id_a", "0", "p"): "p", ("id_a", "0", "q"): "q",
        ("id_a", "1", "r"): "r",
        ("id_b", "x", "u"): "u",
        ("f", "x", "u"): "p",
    }
    return build_depty(g2, fiber, action, name="A2")


def a2_weakened(g2: Presheaf | None = None) -> DepTy:
    """A2 pulled back along its own weakening, over the extended context."""
    g2 = g2 or gamma2()
    A = a2(g2)
    return ty_subst(A, proj_p(g2, A))


def sigma2(g2: Presheaf | None = None) -> NatTrans:
    g2 = g2 or gamma2()
    top = terminal_presheaf(g2.base)
    return build_nat(top, g2, {"a": {"*": "0"}, "b": {"*": "x"}}, name="sigma2")


def p3() -> Presheaf:
    cat = c1()
    return build_presheaf(
        cat,
        carrier={"o": ("e0", "e1", "e2")},
        action={("id_o", e): e for e in ("e0", "e1", "e2")},
        name="P3",
    )


def a01(top: Presheaf | None = None) -> DepTy:
    """Two-element type over the one-object terminal context."""
    top = top or terminal_presheaf(c1())
    return build_depty(top, {("o", "*"): ("0", "1")},
                       {("id_o", "*", "0"): "0", ("id_o", "*", "1"): "1"},
                       name="A01")


def b01(top: Presheaf | None = None) -> DepTy:
    """Constant two-element codomain type over the extension by a01."""
    top = top or terminal_presheaf(c1())
    return constant_depty(comprehension(top, a01(top)), ("u", "v"), name="B01")


def constant_depty(ctx: Presheaf, elems: tuple[str, ...], name: str = "") -> DepTy:
    fiber = {(d, s): sort_elems(elems) for d, s in ctx.points()}
    action = {}
    for mor, s2 in elem_morphisms(ctx):
        m = ctx.base.morphisms[mor]
        for a in fiber[(m.cod, s2)]:
            action[(mor, s2, a)] = a
    return build_depty(ctx, fiber, action, name=name or f"const{len(elems)}")


# --- bounded exhaustive enumeration of types over a context ---

ELEM_POOL = ("u0", "u1", "u2")


def enumerate_deptys(ctx: Presheaf, max_fiber: int = 2) -> list[DepTy]:
    """Every type over ctx with fibers drawn from a fixed element pool of
    size at most `max_fiber`, functor laws enforced."""
    if max_fiber > len(ELEM_POOL):
        raise CapacityError(f"max_fiber {max_fiber} exceeds the element pool")
    points = sorted(ctx.points(), key=lambda p: (p[0], elem_sort_key(p[1])))
    non_id = [(mor, s2) for mor, s2 in elem_morphisms(ctx)
              if mor != ctx.base.identity[ctx.base.morphisms[mor].cod]]

    out: list[DepTy] = []
    for sizes in product(range(1, max_fiber + 1), repeat=len(points)):
        fiber = {pt: ELEM_POOL[:n] for pt, n in zip(points, sizes)}
        # candidate value vector per non-identity restriction entry
        entry_keys: list[tuple[str, Elem, Elem]] = []
        entry_choices: list[tuple[str, ...]] = []
        for mor, s2 in non_id:
            m = ctx.base.morphisms[mor]
            src_fiber = fiber[(m.dom, ctx.act(mor, s2))]
            for a in fiber[(m.cod, s2)]:
                entry_keys.append((mor, s2, a))
                entry_choices.append(src_fiber)
        for values in product(*entry_choices):
            action = dict(zip(entry_keys, values))
            for d, s in points:
                for a in fiber[(d, s)]:
                    action[(ctx.base.identity[d], s, a)] = a
            cand = DepTy(ctx, {pt: tuple(f) for pt, f in fiber.items()}, action)
            if validate_depty(cand).ok:
                cand.name = f"enum{len(out)}"
                out.append(cand)
    return out


# --- base CwF fixtures ---

def unit_cwf(types: tuple[str, ...] = ("T", "U")) -> BaseCwF:
    """CwF structure on the one-object category: every law collapses to an
    equation between the unique entries."""
    cat = c1()
    ty = {"o": types}
    ty_subst_tbl = {(t, "id_o"): t for t in types}
    tm = {("o", t): (f"el({t})",) for t in types}
    tm_subst_tbl = {(f"el({t})", "id_o"): f"el({t})" for t in types}
    compr = {("o", t): "o" for t in types}
    p_tbl = {("o", t): "id_o" for t in types}
    v_tbl = {("o", t): f"el({t})" for t in types}
    ext_tbl = {("id_o", t, f"el({t})"): "id_o" for t in types}
    return build_base_cwf(
        cat=cat, terminal="o", bang={"o": "id_o"},
        ty=ty, ty_subst=ty_subst_tbl, tm=tm, tm_subst=tm_subst_tbl,
        compr=compr, p=p_tbl, v=v_tbl, ext=ext_tbl, name="D1",
    )


def unit_cwf_with_pi(depth: int = 2) -> BaseCwF:
    """Unit CwF whose type set is closed under the function-space former up
    to the given nesting depth; term sets stay singletons."""
    cat = c1()
    levels = [["T", "U"]]
    for _ in range(depth):
        prev = [t for lvl in levels for t in lvl]
        levels.append([f"Pi({s},{t})" for s in prev for t in prev
                       if f"Pi({s},{t})" not in prev])
    types = tuple(t for lvl in levels for t in lvl)
    depth_of = {}
    for i, lvl in enumerate(levels):
        for t in lvl:
            depth_of[t] = i

    pi_ty = {}
    for s in types:
        for t in types:
            name = f"Pi({s},{t})"
            if name in depth_of:
                pi_ty[(s, t)] = name
    lam = {(s, t, f"el({t})"): f"el(Pi({s},{t}))" for (s, t) in pi_ty}
    app = {(s, t, f"el(Pi({s},{t}))", f"el({s})"): f"el({t})" for (s, t) in pi_ty}

    ty = {"o": types}
    base = build_base_cwf(
        cat=cat, terminal="o", bang={"o": "id_o"},
        ty=ty,
        ty_subst={(t, "id_o"): t for t in types},
        tm={("o", t): (f"el({t})",) for t in types},
        tm_subst={(f"el({t})", "id_o"): f"el({t})" for t in types},
        compr={("o", t): "o" for t in types},
        p={("o", t): "id_o" for t in types},
        v={("o", t): f"el({t})" for t in types},
        ext={("id_o", t, f"el({t})"): "id_o" for t in types},
        pi=PiTables(pi_ty, lam, app),
        name="D1pi",
    )
    return base


BASE_TYPES = ("b1", "b2")
MAX_CTX_LEN = 2


def _ctx_name(entries: tuple[str, ...]) -> str:
    return "[" + ",".join(entries) + "]"


def _ren_name(dom: tuple[str, ...], cod: tuple[str, ...], mapping: tuple[int, ...]) -> str:
    return f"r{list(mapping)}:{_ctx_name(dom)}->{_ctx_name(cod)}"


def renaming_cwf() -> BaseCwF:
    """The renaming model: objects are typed contexts (length <= 2 over two
    base types), morphisms assign to each target position a source position
    of the same type.  Types are constant; terms are typed positions;
    comprehension appends within the length bound."""
    contexts = [()]
    for n in range(1, MAX_CTX_LEN + 1):
        contexts.extend(product(BASE_TYPES, repeat=n))
    contexts = [tuple(c) for c in contexts]
    obj_names = {c: _ctx_name(c) for c in contexts}
    objects = [obj_names[c] for c in contexts]
    ctx_of = {v: k for k, v in obj_names.items()}

    mors: dict[str, Mor] = {}
    maps: dict[str, tuple[int, ...]] = {}
    for dom in contexts:
        for cod in contexts:
            # one morphism per type-respecting map: target position i of
            # type tau picks a source position carrying tau
            pools = [
                [j for j, tau2 in enumerate(dom) if tau2 == tau]
                for tau in cod
            ]
            for mapping in product(*pools):
                name = _ren_name(dom, cod, tuple(mapping))
                mors[name] = Mor(name, obj_names[dom], obj_names[cod])
                maps[name] = tuple(mapping)

    identity = {}
    for c in contexts:
        identity[obj_names[c]] = _ren_name(c, c, tuple(range(len(c))))

    comp = {}
    for gname, g in mors.items():
        for fname, f in mors.items():
            if f.cod != g.dom:
                continue
            fm, gm = maps[fname], maps[gname]
            composite = tuple(fm[j] for j in gm)
            comp[(gname, fname)] = _ren_name(ctx_of[f.dom], ctx_of[g.cod], composite)
    cat = build_category(objects, mors, identity, comp, name="DVarCat")

    ty = {obj_names[c]: BASE_TYPES for c in contexts}
    ty_subst_tbl = {(t, m): t for t in BASE_TYPES for m in mors}

    def pos_name(c: tuple[str, ...], i: int) -> str:
        return f"pos{i}@{_ctx_name(c)}"

    tm = {}
    for c in contexts:
        for t in BASE_TYPES:
            tm[(obj_names[c], t)] = tuple(
                pos_name(c, i) for i, tau in enumerate(c) if tau == t)
    tm_subst_tbl = {}
    for mname, m in mors.items():
        dom_c, cod_c = ctx_of[m.dom], ctx_of[m.cod]
        for i, tau in enumerate(cod_c):
            tm_subst_tbl[(pos_name(cod_c, i), mname)] = pos_name(dom_c, maps[mname][i])

    compr, p_tbl, v_tbl = {}, {}, {}
    for c in contexts:
        if len(c) >= MAX_CTX_LEN:
            continue
        for t in BASE_TYPES:
            ext_c = c + (t,)
            compr[(obj_names[c], t)] = obj_names[ext_c]
            p_tbl[(obj_names[c], t)] = _ren_name(ext_c, c, tuple(range(len(c))))
            v_tbl[(obj_names[c], t)] = pos_name(ext_c, len(c))

    ext_tbl = {}
    for (psi_name, t), ext_name in compr.items():
        psi = ctx_of[psi_name]
        for mname, m in mors.items():
            if m.cod != psi_name:
                continue
            delta = ctx_of[m.dom]
            for tm_id in tm[(m.dom, t)]:
                i = int(tm_id.split("@")[0][3:])
                mapping = maps[mname] + (i,)
                ext_tbl[(mname, t, tm_id)] = _ren_name(delta, psi + (t,), mapping)

    return build_base_cwf(
        cat=cat, terminal=obj_names[()],
        bang={obj_names[c]: _ren_name(c, (), ()) for c in contexts},
        ty=ty, ty_subst=ty_subst_tbl, tm=tm, tm_subst=tm_subst_tbl,
        compr=compr, p=p_tbl, v=v_tbl, ext=ext_tbl, name="DVar",
    )


# --- registry ---

def registry() -> dict:
    """All named fixtures, keyed the way manifests and suites refer to them."""
    from .cwf import enumerate_terms

    cat1, cat2 = c1(), c2()
    top1 = terminal_presheaf(cat1)
    g2 = gamma2()
    A = a2(g2)
    A0 = a01(top1)
    (m_a2,) = enumerate_terms(A)
    m_a2.name = "M_A2"
    return {
        "categories": {"C1": cat1, "C2": cat2},
        "presheaves": {
            "T1": top1,
            "T2": terminal_presheaf(cat2),
            "P3": p3(),
            "G2": g2,
            "G2.A2": comprehension(g2, A),
            "T1.A01": comprehension(top1, A0),
        },
        "deptys": {"A2": A, "A2p": a2_weakened(g2),
                   "A01": A0, "B01": b01(top1)},
        "nats": {"sigma2": sigma2(g2)},
        "terms": {"M_A2": m_a2},
        "base_cwfs": {
            "D1": unit_cwf(),
            "D1pi": unit_cwf_with_pi(),
            "DVar": renaming_cwf(),
        },
    }
