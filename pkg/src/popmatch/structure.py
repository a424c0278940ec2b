"""Detection and validation of structured-preference properties."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import PreferenceSystem
from .errors import InvalidAxis, NotStrict


@dataclass(frozen=True)
class MasterListCertificate:
    """A total order over one side from which every opposite-side list
    arises by restriction to the neighborhood."""

    side: str  # "a" or "b"
    order: tuple[str, ...]

    def validate(self, ps: PreferenceSystem) -> bool:
        members = ps.side_a if self.side == "a" else ps.side_b
        if sorted(self.order) != sorted(members):
            return False
        position = {v: i for i, v in enumerate(self.order)}
        opposite = ps.side_b if self.side == "a" else ps.side_a
        for w in opposite:
            lst = ps.neighbors(w)
            if list(lst) != sorted(lst, key=position.__getitem__):
                return False
        return True


def find_master_list(
    ps: PreferenceSystem, side: str
) -> Optional[MasterListCertificate]:
    """Recover a master list over ``side`` if one exists.

    Every consecutive pair in an opposite-side list is a precedence
    constraint; a topological order of the constraint digraph is a
    master list, and a cycle means none exists. Incomparable vertices
    are ordered by their input position.
    """
    if not ps.strict():
        raise NotStrict("master-list detection requires strict preferences")
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    members = ps.side_a if side == "a" else ps.side_b
    opposite = ps.side_b if side == "a" else ps.side_a
    pos = {v: i for i, v in enumerate(members)}

    succ: dict[str, set[str]] = {v: set() for v in members}
    indeg = {v: 0 for v in members}
    for w in opposite:
        lst = ps.neighbors(w)
        for x, y in zip(lst, lst[1:]):
            if y not in succ[x]:
                succ[x].add(y)
                indeg[y] += 1

    heap = [pos[v] for v in members if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        v = members[heapq.heappop(heap)]
        order.append(v)
        for u in sorted(succ[v], key=pos.__getitem__):
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, pos[u])
    if len(order) != len(members):
        return None  # precedence cycle
    cert = MasterListCertificate(side, tuple(order))
    assert cert.validate(ps)
    return cert


def validate_single_peaked(
    ps: PreferenceSystem, axis_a: Sequence[str], axis_b: Sequence[str]
) -> bool:
    """True iff every vertex's preferences are unimodal along the axis
    ordering of its (opposite-side) neighbors: once they start falling
    away from the peak they keep falling."""
    if not ps.strict():
        raise NotStrict("single-peaked validation requires strict preferences")
    if sorted(axis_a) != sorted(ps.side_a):
        raise InvalidAxis("axis_a must order side_a exactly")
    if sorted(axis_b) != sorted(ps.side_b):
        raise InvalidAxis("axis_b must order side_b exactly")
    pos_a = {v: i for i, v in enumerate(axis_a)}
    pos_b = {v: i for i, v in enumerate(axis_b)}

    for v in ps.side_a + ps.side_b:
        axis_pos = pos_b if ps.side_of(v) == "a" else pos_a
        nbrs = sorted(ps.neighbors(v), key=axis_pos.__getitem__)
        ranks = [ps.rank_of(v, u) for u in nbrs]
        falling = False
        for r1, r2 in zip(ranks, ranks[1:]):
            if r2 > r1:  # preference drops moving along the axis
                falling = True
            elif falling:  # rose again after falling: a valley
                return False
    return True
