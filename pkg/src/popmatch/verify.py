"""Independent verifiers: popularity, Pareto-optimality, and the
single-blocking-edge characterization.

Two routes are kept deliberately separate: ``is_popular_bruteforce``
enumerates every matching straight from the definition (and accepts
ties), while ``is_popular`` reduces the vote contest to one exact
maximum-weight matching computation. The test suite pins the two
against each other.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Optional

from . import core
from .core import Edge, Matching, PreferenceSystem
from .errors import InstanceTooLarge, NotStrict, UnknownEdge
from .maxmatching import max_weight_matching

#: Per-side vertex guard for the brute-force enumerators. Can be
#: overridden with the POPMATCH_ORACLE_LIMIT environment variable.
DEFAULT_ORACLE_LIMIT = 16


def oracle_limit() -> int:
    return int(os.environ.get("POPMATCH_ORACLE_LIMIT", DEFAULT_ORACLE_LIMIT))


def _require_strict(ps: PreferenceSystem) -> None:
    if not ps.strict():
        raise NotStrict("operation is defined for strict preferences only")


@dataclass(frozen=True)
class GmSubgraph:
    """Subgraph keeping every edge except non-matching edges both of
    whose endpoints strictly prefer their partner in the reference
    matching."""

    base: PreferenceSystem
    kept_edges: tuple[Edge, ...]
    matching: Matching

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.base.side_a + self.base.side_b}
        for a, b in self.kept_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class PopularityVerdict:
    popular: bool
    witness: Optional[Matching] = None

    def __post_init__(self):
        assert self.popular == (self.witness is None)


def build_gm(ps: PreferenceSystem, m: Matching) -> GmSubgraph:
    """Delete the (-,-) edges: non-matching edges where both endpoints
    strictly prefer their current partner. Unmatched endpoints never
    trigger a deletion."""
    _require_strict(ps)
    core._require_matching(ps, m)
    kept = []
    for a, b in ps.edges:
        pa, pb = m.partner(a), m.partner(b)
        if pa == b:
            kept.append((a, b))
            continue
        a_prefers_partner = pa is not None and ps.prefers(a, pa, b)
        b_prefers_partner = pb is not None and ps.prefers(b, pb, a)
        if not (a_prefers_partner and b_prefers_partner):
            kept.append((a, b))
    return GmSubgraph(ps, tuple(kept), m)


def is_popular_bruteforce(
    ps: PreferenceSystem, m: Matching, force: bool = False
) -> PopularityVerdict:
    """Definition-level popularity oracle; works with ties.

    Scans every matching in canonical enumeration order and reports the
    first one that wins the head-to-head vote, if any.
    """
    core._require_matching(ps, m)
    limit = oracle_limit()
    if not force and (len(ps.side_a) > limit or len(ps.side_b) > limit):
        raise InstanceTooLarge(
            f"more than {limit} vertices per side; pass force=True or set "
            "POPMATCH_ORACLE_LIMIT"
        )
    rank = ps._rank
    base = {v: m.partner(v) for v in ps.side_a + ps.side_b}
    for pairs in core.enumerate_matchings(ps):
        other = dict.fromkeys(base)
        for a, b in pairs:
            other[a] = b
            other[b] = a
        delta = 0
        for v, old in base.items():
            new = other[v]
            if new == old:
                continue
            if old is None:
                delta += 1
            elif new is None:
                delta -= 1
            else:
                rn, ro = rank[v][new], rank[v][old]
                if rn < ro:
                    delta += 1
                elif rn > ro:
                    delta -= 1
        if delta > 0:
            return PopularityVerdict(False, Matching(ps, pairs))
    return PopularityVerdict(True, None)


def is_popular(ps: PreferenceSystem, m: Matching) -> PopularityVerdict:
    """Polynomial popularity test via one max-weight matching.

    Each edge (a, b) is weighted by the two endpoint votes for switching
    to it, plus one unit per endpoint that is matched under ``m``; the
    constant shift folds the "staying alone costs a matched vertex one
    vote" term into the edge weights, so plain matchings (free exposure)
    maximize the vote balance. ``m`` is popular iff the maximum equals
    the number of matched vertices.
    """
    _require_strict(ps)
    core._require_matching(ps, m)
    a_idx = {v: i for i, v in enumerate(ps.side_a)}
    b_idx = {v: i for i, v in enumerate(ps.side_b)}

    def gain(v: str, u: str) -> int:
        # vote of v for u versus its m-state, plus 1 if v is matched
        p = m.partner(v)
        if p is None:
            return 1
        if p == u:
            return 0 + 1
        return (1 if ps.prefers(v, u, p) else -1) + 1

    edges = [
        (a_idx[a], b_idx[b], gain(a, b) + gain(b, a)) for a, b in ps.edges
    ]
    best, pairs = max_weight_matching(len(ps.side_a), len(ps.side_b), edges)
    threshold = len(m.vertices())
    if best <= threshold:
        return PopularityVerdict(True, None)
    witness = Matching(
        ps, [(ps.side_a[i], ps.side_b[j]) for i, j in pairs]
    )
    delta = core.delta_votes(ps, m, witness)
    if delta != best - threshold:  # pragma: no cover - internal consistency
        raise AssertionError("vote-graph maximizer does not re-validate")
    return PopularityVerdict(False, witness)


@dataclass(frozen=True)
class SingleBlockingReport:
    """Outcome of the four single-blocking-edge conditions for (m, e)."""

    c1: bool
    c2: bool
    c3i: bool
    c3ii: bool

    def all_hold(self) -> bool:
        return self.c1 and self.c2 and self.c3i and self.c3ii


def check_single_blocking(
    ps: PreferenceSystem, m: Matching, e: Edge
) -> SingleBlockingReport:
    """Check the four conditions characterizing "popular with exactly
    one blocking edge e=(u,v)":

    c1   e blocks m;
    c2   m is stable once e is removed;
    c3i  no even-length m-alternating path in the pruned subgraph of
         G-e from an m-unmatched vertex to u or to v;
    c3ii no m-alternating path there from u to v that starts and ends
         with matching edges.

    If ``e`` happens to lie in ``m``, c1 is false and the remaining
    conditions are evaluated for ``m`` minus that edge (the matching
    induced in G-e).
    """
    _require_strict(ps)
    core._require_matching(ps, m)
    e = ps.as_edge(e)
    u, v = e

    c1 = e in blocking_set(ps, m)
    sub = core.restrict(ps, [e])
    m_sub = Matching(sub, [p for p in m.pairs if p != e])
    c2 = core.is_stable(sub, m_sub)

    gm = build_gm(sub, m_sub)
    kept_non_matching: dict[str, list[str]] = {
        w: [] for w in sub.side_a + sub.side_b
    }
    for a, b in gm.kept_edges:
        if m_sub.partner(a) != b:
            kept_non_matching[a].append(b)
            kept_non_matching[b].append(a)

    # State (w, 1) = reached w on an even step (just traversed a matching
    # edge, or started there unmatched); (w, 0) = odd step.
    even = set()
    odd = set()
    queue: deque[tuple[str, int]] = deque()
    for w in sub.side_a + sub.side_b:
        if not m_sub.is_matched(w):
            even.add(w)
            queue.append((w, 1))
    while queue:
        w, state = queue.popleft()
        if state == 1:
            for x in kept_non_matching[w]:
                if x not in odd:
                    odd.add(x)
                    queue.append((x, 0))
        else:
            x = m_sub.partner(w)
            if x is not None and x not in even:
                even.add(x)
                queue.append((x, 1))
    c3i = not (u in even or v in even)

    c3ii = True
    start = m_sub.partner(u)
    if start is not None:
        seen_even = {start}
        seen_odd = set()
        queue = deque([(start, 1)])
        reached = False
        while queue:
            w, state = queue.popleft()
            if state == 1:
                if w == v:
                    reached = True
                    break
                for x in kept_non_matching[w]:
                    if x not in seen_odd:
                        seen_odd.add(x)
                        queue.append((x, 0))
            else:
                x = m_sub.partner(w)
                if x is not None and x not in seen_even:
                    seen_even.add(x)
                    queue.append((x, 1))
        c3ii = not reached
    return SingleBlockingReport(c1, c2, c3i, c3ii)


def blocking_set(ps: PreferenceSystem, m: Matching) -> frozenset[Edge]:
    return frozenset(core.blocking_edges(ps, m))


def find_pareto_improvement(
    ps: PreferenceSystem, m: Matching
) -> Optional[Matching]:
    """Return a Pareto-improvement of ``m`` if one exists.

    Works over the subgraph of edges on which neither endpoint loses
    relative to its m-state. A big per-covered-matched-vertex weight
    forces any maximizer to keep every matched vertex matched; the small
    term counts strictly improved endpoints. An improvement exists iff
    the optimum exceeds the forced part.
    """
    _require_strict(ps)
    core._require_matching(ps, m)
    big = 2 * len(ps.edges) + 1
    a_idx = {x: i for i, x in enumerate(ps.side_a)}
    b_idx = {x: i for i, x in enumerate(ps.side_b)}

    def endpoint_terms(x: str, new: str) -> tuple[int, int]:
        # (covered-matched weight, strict-improvement bonus)
        p = m.partner(x)
        if p is None:
            return 0, 1
        if new == p:
            return big, 0
        if ps.prefers(x, new, p):
            return big, 1
        return -1, 0  # marks a forbidden edge

    edges = []
    for a, b in ps.edges:
        wa, sa = endpoint_terms(a, b)
        wb, sb = endpoint_terms(b, a)
        if wa < 0 or wb < 0:
            continue
        edges.append((a_idx[a], b_idx[b], wa + wb + sa + sb))
    best, pairs = max_weight_matching(len(ps.side_a), len(ps.side_b), edges)
    if best < big * len(m.vertices()) + 1:
        return None
    better = Matching(ps, [(ps.side_a[i], ps.side_b[j]) for i, j in pairs])
    if core.delta_votes(ps, m, better) <= 0:  # pragma: no cover
        raise AssertionError("pareto improvement does not re-validate")
    return better


def pareto_closure(ps: PreferenceSystem, m: Matching) -> Matching:
    """Apply Pareto-improvements until none exists.

    Every step weakly improves all vertices, so no vertex ends up worse,
    the matching never shrinks, and any edge blocking the result already
    blocked the input.
    """
    _require_strict(ps)
    guard = (len(ps.side_a) + len(ps.side_b)) ** 2 + 1
    current = m
    for _ in range(guard):
        nxt = find_pareto_improvement(ps, current)
        if nxt is None:
            return current
        current = nxt
    raise RuntimeError(
        "pareto_closure failed to reach a fixed point; improvement chain "
        "exceeded the |V|^2 guard"
    )
