"""Backtracking enumeration of dependent choice functions under forcing.

Used to enumerate natural transformations and semantic terms: both are
finite choice functions subject to constraints of the shape "the value at
slot X forces the value at slot Y through a finite function".  Plain
product-then-filter enumeration is exponential in the number of slots;
forcing collapses it to the number of genuinely free slots, which is what
makes term enumeration over internalized structures tractable.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, Sequence

Slot = Hashable


def forced_search(
    order: Sequence[Slot],
    domain_of: Callable[[Slot], Iterable[Any]],
    forcings: dict[Slot, list[tuple[Slot, Callable[[Any], Any]]]],
) -> list[dict[Slot, Any]]:
    """All total assignments consistent with the forcing constraints.

    ``forcings[x]`` lists pairs ``(y, f)`` meaning: once ``x`` has value
    ``v``, slot ``y`` must have value ``f(v)``.  Constraints are applied
    transitively; contradictions prune the branch.
    """
    results: list[dict[Slot, Any]] = []

    def propagate(trial: dict[Slot, Any], start: Slot) -> bool:
        stack = [start]
        while stack:
            cur = stack.pop()
            val = trial[cur]
            for target, force in forcings.get(cur, ()):
                forced = force(val)
                if target in trial:
                    if trial[target] != forced:
                        return False
                else:
                    trial[target] = forced
                    stack.append(target)
        return True

    def assign(idx: int, trial: dict[Slot, Any]) -> None:
        while idx < len(order) and order[idx] in trial:
            idx += 1
        if idx == len(order):
            results.append(trial)
            return
        slot = order[idx]
        for val in domain_of(slot):
            attempt = dict(trial)
            attempt[slot] = val
            if propagate(attempt, slot):
                assign(idx + 1, attempt)

    assign(0, {})
    return results
