"""Element values stored in presheaf carriers and type fibers.

An element is one of:
  * a plain string id (caller-supplied, scoped to its carrier or fiber),
  * a pair tuple ``(s, a)`` produced by context comprehension, or
  * a ``PiElement``: a finite dependent-function table.

Pairs keep structural equality on purpose: the surjective-pairing law of
the comprehension structure is then literally tuple extensionality.
"""

from __future__ import annotations

from typing import Any, Iterable, Union

from .errors import StructuralError

Elem = Union[str, tuple, "PiElement"]


class PiElement:
    """One element of a dependent-function fiber.

    ``table`` maps keys ``(obj, mor, arg)`` to result elements: for every
    base morphism into the anchor world and every argument in the domain
    fiber there, the chosen result.  Tables are canonicalized (sorted by
    key) so equality and hashing are bit-exact.

    The anchor ``(obj, elem)`` records the context point the element was
    built at.  It is reporting metadata only and excluded from equality:
    substitution reindexes fibers without changing the tables, and the
    function-space substitution law is an equality of table sets.
    """

    __slots__ = ("table", "anchor", "_hash")

    def __init__(self, table: Iterable[tuple[tuple[str, str, Elem], Elem]],
                 anchor: tuple[str, Elem]):
        items = tuple(sorted(table, key=lambda kv: elem_sort_key(kv[0])))
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise StructuralError("duplicate keys in function table")
        self.table = items
        self.anchor = anchor
        self._hash = hash(self.table)

    def __call__(self, obj: str, mor: str, arg: Elem) -> Elem:
        for (o, m, a), res in self.table:
            if o == obj and m == mor and a == arg:
                return res
        raise StructuralError(
            f"function table has no entry at ({obj}, {mor}, {arg!r})")

    def keys(self) -> list[tuple[str, str, Elem]]:
        return [k for k, _ in self.table]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PiElement) and self.table == other.table

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PiElement({len(self.table)} entries @ {self.anchor!r})"


def elem_sort_key(e: Any) -> str:
    """Total order over heterogeneous elements, used for canonical layouts."""
    if isinstance(e, str):
        return "s:" + e
    if isinstance(e, tuple):
        return "t:(" + ",".join(elem_sort_key(x) for x in e) + ")"
    if isinstance(e, PiElement):
        return "f:{" + ",".join(
            elem_sort_key(k) + "=>" + elem_sort_key(v) for k, v in e.table) + "}"
    raise StructuralError(f"not an element: {e!r}")


def sort_elems(elems: Iterable[Elem]) -> tuple[Elem, ...]:
    return tuple(sorted(elems, key=elem_sort_key))


def elem_to_doc(e: Elem) -> Any:
    """JSON encoding: strings as-is, pairs as 2-arrays, tables as objects."""
    if isinstance(e, str):
        return e
    if isinstance(e, tuple):
        return [elem_to_doc(x) for x in e]
    if isinstance(e, PiElement):
        return {
            "anchor": {"obj": e.anchor[0], "elem": elem_to_doc(e.anchor[1])},
            "table": [
                {"obj": o, "mor": m, "arg": elem_to_doc(a), "result": elem_to_doc(r)}
                for (o, m, a), r in e.table
            ],
        }
    raise StructuralError(f"not an element: {e!r}")


def elem_from_doc(doc: Any) -> Elem:
    if isinstance(doc, str):
        return doc
    if isinstance(doc, list):
        return tuple(elem_from_doc(x) for x in doc)
    if isinstance(doc, dict) and "table" in doc:
        anchor_doc = doc.get("anchor", {})
        anchor = (anchor_doc.get("obj", ""), elem_from_doc(anchor_doc.get("elem", "")))
        table = [
            ((row["obj"], row["mor"], elem_from_doc(row["arg"])),
             elem_from_doc(row["result"]))
            for row in doc["table"]
        ]
        return PiElement(table, anchor)
    raise StructuralError(f"cannot decode element from {doc!r}")
