"""Bipartite preference systems, matchings, and edge valuations.

Vertices are string ids. Every edge is stored as an ``(a_id, b_id)`` pair
with the first endpoint on side A. Preference lists are sequences of
rank-groups (tuples of neighbor ids): a group of size one is a strict
rank, a larger group is a tie. All types here are immutable after
construction, so shared instances are safe to use concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    InvalidMatching,
    InvalidPreferenceSystem,
    NotBipartite,
    UnknownEdge,
    UnknownElement,
)

Edge = tuple[str, str]

#: Explicit sentinel for "vertex has no partner". Kept as ``None`` so that
#: partner lookups read naturally; never modeled as a phantom vertex.
UNMATCHED = None


class PreferenceSystem:
    """A bipartite graph plus per-vertex ranked lists of neighbors.

    ``prefs`` maps each vertex to its descending list of rank-groups.
    Symmetry is enforced: ``b`` appears in ``prefs[a]`` iff ``a`` appears
    in ``prefs[b]``. The derived edge set is kept in a canonical order,
    lexicographic on (a-side input index, b-side input index).
    """

    __slots__ = (
        "side_a",
        "side_b",
        "prefs",
        "edges",
        "edge_set",
        "_index",
        "_side",
        "_rank",
        "_strict",
    )

    def __init__(
        self,
        side_a: Sequence[str],
        side_b: Sequence[str],
        prefs: Mapping[str, Sequence[Sequence[str]]],
    ):
        side_a = tuple(side_a)
        side_b = tuple(side_b)
        if len(set(side_a)) != len(side_a) or len(set(side_b)) != len(side_b):
            raise InvalidPreferenceSystem("duplicate vertex id within a side")
        overlap = set(side_a) & set(side_b)
        if overlap:
            raise InvalidPreferenceSystem(f"vertices on both sides: {sorted(overlap)}")

        side: dict[str, str] = {}
        index: dict[str, int] = {}
        for i, v in enumerate(side_a):
            side[v] = "a"
            index[v] = i
        for i, v in enumerate(side_b):
            side[v] = "b"
            index[v] = i

        for v in prefs:
            if v not in side:
                raise InvalidPreferenceSystem(f"preference list for unknown vertex {v!r}")

        norm: dict[str, tuple[tuple[str, ...], ...]] = {}
        rank: dict[str, dict[str, int]] = {}
        for v in list(side_a) + list(side_b):
            groups = []
            ranks: dict[str, int] = {}
            for gi, group in enumerate(prefs.get(v, ())):
                members = tuple(group)
                if not members:
                    raise InvalidPreferenceSystem(f"empty rank-group in list of {v!r}")
                for u in members:
                    if u == v:
                        raise InvalidPreferenceSystem(f"{v!r} ranks itself")
                    if u not in side:
                        raise UnknownElement(f"{v!r} ranks unknown vertex {u!r}")
                    if side[u] == side[v]:
                        raise NotBipartite(f"{v!r} and {u!r} are on the same side")
                    if u in ranks:
                        raise InvalidPreferenceSystem(
                            f"{u!r} appears twice in the list of {v!r}"
                        )
                    ranks[u] = gi
                # canonical inner order, ties are sets
                groups.append(tuple(sorted(members, key=index.__getitem__)))
            norm[v] = tuple(groups)
            rank[v] = ranks

        for a in side_a:
            for b in rank[a]:
                if a not in rank[b]:
                    raise InvalidPreferenceSystem(
                        f"asymmetric edge: {b!r} in list of {a!r} but not vice versa"
                    )
        for b in side_b:
            for a in rank[b]:
                if b not in rank[a]:
                    raise InvalidPreferenceSystem(
                        f"asymmetric edge: {a!r} in list of {b!r} but not vice versa"
                    )

        edges = tuple(
            sorted(
                ((a, b) for a in side_a for b in rank[a]),
                key=lambda e: (index[e[0]], index[e[1]]),
            )
        )

        object.__setattr__(self, "side_a", side_a)
        object.__setattr__(self, "side_b", side_b)
        object.__setattr__(self, "prefs", norm)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "edge_set", frozenset(edges))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_side", side)
        object.__setattr__(self, "_rank", rank)
        object.__setattr__(
            self, "_strict", all(len(g) == 1 for v in norm for g in norm[v])
        )

    def __setattr__(self, name, value):
        raise AttributeError("PreferenceSystem is immutable")

    @classmethod
    def from_strict_lists(
        cls,
        side_a: Sequence[str],
        side_b: Sequence[str],
        lists: Mapping[str, Sequence[str]],
    ) -> "PreferenceSystem":
        """Build a strict system from flat preference lists."""
        prefs = {v: [[u] for u in lst] for v, lst in lists.items()}
        return cls(side_a, side_b, prefs)

    # -- queries ---------------------------------------------------------

    def strict(self) -> bool:
        return self._strict

    def side_of(self, v: str) -> str:
        try:
            return self._side[v]
        except KeyError:
            raise UnknownElement(f"unknown vertex {v!r}") from None

    def index_of(self, v: str) -> int:
        self.side_of(v)
        return self._index[v]

    def neighbors(self, v: str) -> tuple[str, ...]:
        """Neighbors of ``v`` in descending preference order (ties flattened)."""
        self.side_of(v)
        return tuple(u for group in self.prefs[v] for u in group)

    def pref_groups(self, v: str) -> tuple[tuple[str, ...], ...]:
        self.side_of(v)
        return self.prefs[v]

    def degree(self, v: str) -> int:
        return len(self._rank[v])

    def rank_of(self, v: str, u: str) -> int:
        """Rank-group index of neighbor ``u`` in the list of ``v`` (0 = best)."""
        try:
            return self._rank[v][u]
        except KeyError:
            raise UnknownEdge(f"{u!r} is not a neighbor of {v!r}") from None

    def prefers(self, v: str, x: str, y: str) -> bool:
        """True iff ``v`` strictly prefers neighbor ``x`` to neighbor ``y``."""
        return self.rank_of(v, x) < self.rank_of(v, y)

    def prefers_to_state(self, v: str, x: str, current: Optional[str]) -> bool:
        """True iff ``v`` strictly prefers ``x`` over being matched to
        ``current`` (``None`` meaning unmatched)."""
        rx = self.rank_of(v, x)
        if current is None:
            return True
        return rx < self.rank_of(v, current)

    def as_edge(self, pair: Sequence[str]) -> Edge:
        """Normalize a 2-element pair to canonical ``(a, b)`` orientation."""
        if len(pair) != 2:
            raise UnknownEdge(f"not an edge: {pair!r}")
        x, y = pair
        if self.side_of(x) == "b" and self.side_of(y) == "a":
            x, y = y, x
        if (x, y) not in self.edge_set:
            raise UnknownEdge(f"edge {pair!r} is not in the system")
        return (x, y)

    def sort_edges(self, edges: Iterable[Edge]) -> tuple[Edge, ...]:
        idx = self._index
        return tuple(sorted(edges, key=lambda e: (idx[e[0]], idx[e[1]])))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PreferenceSystem)
            and self.side_a == other.side_a
            and self.side_b == other.side_b
            and self.prefs == other.prefs
        )

    def __hash__(self):
        return hash((self.side_a, self.side_b))

    def __repr__(self):
        return (
            f"PreferenceSystem({len(self.side_a)}+{len(self.side_b)} vertices, "
            f"{len(self.edges)} edges)"
        )


class Matching:
    """A set of pairwise non-adjacent edges with partner lookup."""

    __slots__ = ("pairs", "_pairset", "_partner")

    def __init__(self, ps: PreferenceSystem, pairs: Iterable[Sequence[str]]):
        norm = [ps.as_edge(p) for p in pairs]
        partner: dict[str, str] = {}
        for a, b in norm:
            if a in partner or b in partner:
                raise InvalidMatching(f"edge ({a!r}, {b!r}) shares an endpoint")
            partner[a] = b
            partner[b] = a
        object.__setattr__(self, "pairs", ps.sort_edges(norm))
        object.__setattr__(self, "_pairset", frozenset(norm))
        object.__setattr__(self, "_partner", partner)

    def __setattr__(self, name, value):
        raise AttributeError("Matching is immutable")

    def partner(self, v: str) -> Optional[str]:
        return self._partner.get(v, UNMATCHED)

    def is_matched(self, v: str) -> bool:
        return v in self._partner

    def vertices(self) -> frozenset[str]:
        return frozenset(self._partner)

    def __contains__(self, edge) -> bool:
        e = tuple(edge)
        return e in self._pairset or (e[1], e[0]) in self._pairset

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __eq__(self, other):
        return isinstance(other, Matching) and set(self.pairs) == set(other.pairs)

    def __hash__(self):
        return hash(frozenset(self.pairs))

    def __repr__(self):
        return f"Matching({list(self.pairs)})"


@dataclass(frozen=True)
class Valuation:
    """Per-edge utility and cost plus the objective and budget parameters.

    Sums are computed with Python integers, so there is no overflow to
    guard against even for the large shifted weights used by the budgeted
    solvers.
    """

    utility: Mapping[Edge, int]
    cost: Mapping[Edge, int]
    objective_t: int = 0
    budget_k: int = 0

    def __post_init__(self):
        for name, table in (("utility", self.utility), ("cost", self.cost)):
            for e, x in table.items():
                if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                    raise ValueError(f"{name}[{e!r}] must be a non-negative integer")
        if self.objective_t < 0 or self.budget_k < 0:
            raise ValueError("objective and budget must be non-negative")
        object.__setattr__(self, "utility", dict(self.utility))
        object.__setattr__(self, "cost", dict(self.cost))


@dataclass(frozen=True)
class Instance:
    """A preference system together with a valuation over exactly its edges."""

    ps: PreferenceSystem
    val: Valuation

    def __post_init__(self):
        edges = self.ps.edge_set
        for name, table in (("utility", self.val.utility), ("cost", self.val.cost)):
            keys = set(table)
            if keys != edges:
                missing = edges - keys
                extra = keys - edges
                raise UnknownEdge(
                    f"{name} keys do not cover the edge set exactly "
                    f"(missing {sorted(missing)}, extra {sorted(extra)})"
                )

    @classmethod
    def uniform(
        cls, ps: PreferenceSystem, t: int = 0, k: int = 0
    ) -> "Instance":
        """Instance with utility and cost identically 1."""
        ones = {e: 1 for e in ps.edges}
        return cls(ps, Valuation(dict(ones), dict(ones), t, k))


# -- operations ------------------------------------------------------------


def _require_matching(ps: PreferenceSystem, m: Matching) -> None:
    for e in m.pairs:
        if e not in ps.edge_set:
            raise InvalidMatching(f"matching edge {e!r} is missing from the system")


def blocking_edges(ps: PreferenceSystem, m: Matching) -> tuple[Edge, ...]:
    """All edges whose endpoints each strictly prefer the edge to their
    current state under ``m``, in canonical order."""
    _require_matching(ps, m)
    out = []
    for a, b in ps.edges:
        if m.partner(a) == b:
            continue
        if ps.prefers_to_state(a, b, m.partner(a)) and ps.prefers_to_state(
            b, a, m.partner(b)
        ):
            out.append((a, b))
    return tuple(out)


def is_stable(ps: PreferenceSystem, m: Matching) -> bool:
    return not blocking_edges(ps, m)


def _vote(ps: PreferenceSystem, v: str, new: Optional[str], old: Optional[str]) -> int:
    """+1 if v prefers partner ``new`` over ``old``, -1 the other way."""
    if new == old:
        return 0
    if old is None:
        return 1
    if new is None:
        return -1
    rn, ro = ps.rank_of(v, new), ps.rank_of(v, old)
    if rn < ro:
        return 1
    if rn > ro:
        return -1
    return 0


def delta_votes(ps: PreferenceSystem, m: Matching, m2: Matching) -> int:
    """Vote balance between two matchings.

    Returns (#vertices preferring ``m2``) - (#vertices preferring ``m``);
    ``m2`` is more popular than ``m`` iff the result is positive.
    """
    _require_matching(ps, m)
    _require_matching(ps, m2)
    total = 0
    for v in ps.side_a + ps.side_b:
        total += _vote(ps, v, m2.partner(v), m.partner(v))
    return total


def valuate(val: Valuation, f: Iterable[Edge]) -> tuple[int, int]:
    """Component-wise (utility, cost) sums over an edge set."""
    u = c = 0
    for e in f:
        e = tuple(e)
        if e not in val.utility:
            raise UnknownEdge(f"no valuation entry for edge {e!r}")
        u += val.utility[e]
        c += val.cost[e]
    return u, c


def is_feasible(inst: Instance, m: Matching) -> bool:
    """utility(m) >= t and cost(blocking edges of m) <= k."""
    _require_matching(inst.ps, m)
    u, _ = valuate(inst.val, m.pairs)
    if u < inst.val.objective_t:
        return False
    _, c = valuate(inst.val, blocking_edges(inst.ps, m))
    return c <= inst.val.budget_k


def restrict(ps: PreferenceSystem, x: Iterable) -> PreferenceSystem:
    """Delete a set of edges and/or vertices, keeping the relative order
    of all surviving neighbors and dropping emptied rank-groups."""
    gone_vertices: set[str] = set()
    gone_edges: set[Edge] = set()
    for item in x:
        if isinstance(item, str):
            ps.side_of(item)
            gone_vertices.add(item)
        else:
            try:
                gone_edges.add(ps.as_edge(item))
            except UnknownEdge as exc:
                raise UnknownElement(str(exc)) from None

    def dead(v: str, u: str) -> bool:
        if u in gone_vertices or v in gone_vertices:
            return True
        e = (v, u) if ps.side_of(v) == "a" else (u, v)
        return e in gone_edges

    side_a = tuple(v for v in ps.side_a if v not in gone_vertices)
    side_b = tuple(v for v in ps.side_b if v not in gone_vertices)
    prefs = {}
    for v in side_a + side_b:
        groups = []
        for group in ps.prefs[v]:
            kept = [u for u in group if not dead(v, u)]
            if kept:
                groups.append(kept)
        prefs[v] = groups
    return PreferenceSystem(side_a, side_b, prefs)


def enumerate_matchings(ps: PreferenceSystem) -> Iterator[tuple[Edge, ...]]:
    """Yield every matching of ``ps`` as a tuple of canonical edges.

    Canonical enumeration order: depth-first over side-A vertices in input
    order, each choosing "unmatched" before its neighbors in b-index order.
    The empty matching comes first.
    """
    side_a = ps.side_a
    nbrs = [
        sorted((ps._rank[a].keys()), key=ps._index.__getitem__) for a in side_a
    ]
    used: set[str] = set()
    chosen: list[Edge] = []

    def rec(i: int) -> Iterator[tuple[Edge, ...]]:
        if i == len(side_a):
            yield tuple(chosen)
            return
        yield from rec(i + 1)  # leave side_a[i] unmatched
        a = side_a[i]
        for b in nbrs[i]:
            if b in used:
                continue
            used.add(b)
            chosen.append((a, b))
            yield from rec(i + 1)
            chosen.pop()
            used.remove(b)

    yield from rec(0)


# -- instance JSON ----------------------------------------------------------


def _edge_key(e: Edge) -> str:
    return f"{e[0]} {e[1]}"


def _parse_edge_key(key: str) -> Edge:
    parts = key.split(" ")
    if len(parts) != 2:
        raise UnknownEdge(f"bad edge key {key!r}: expected '<a-id> <b-id>'")
    return (parts[0], parts[1])


def instance_to_json(inst: Instance) -> dict:
    ps = inst.ps
    return {
        "side_a": list(ps.side_a),
        "side_b": list(ps.side_b),
        "prefs": {v: [list(g) for g in ps.prefs[v]] for v in ps.side_a + ps.side_b},
        "utility": {_edge_key(e): inst.val.utility[e] for e in ps.edges},
        "cost": {_edge_key(e): inst.val.cost[e] for e in ps.edges},
        "t": inst.val.objective_t,
        "k": inst.val.budget_k,
    }


def instance_from_json(data: Mapping) -> Instance:
    for field in ("side_a", "side_b", "prefs"):
        if field not in data:
            raise InvalidPreferenceSystem(f"instance JSON is missing {field!r}")
    ps = PreferenceSystem(data["side_a"], data["side_b"], data["prefs"])
    utility = {e: 1 for e in ps.edges}
    cost = {e: 1 for e in ps.edges}
    for name, table in (("utility", utility), ("cost", cost)):
        if name in data:
            for key, x in data[name].items():
                e = ps.as_edge(_parse_edge_key(key))
                table[e] = x
    val = Valuation(utility, cost, int(data.get("t", 0)), int(data.get("k", 0)))
    return Instance(ps, val)


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def dump_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(inst), fh, indent=2, sort_keys=True)
        fh.write("\n")
