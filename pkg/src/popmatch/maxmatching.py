"""Exact maximum-weight bipartite matching on integer weights.

Successive shortest augmenting paths with vertex potentials (the
augmenting-path form of the Hungarian method). All arithmetic is on
Python integers, so results are exact for any weight magnitude. The
matching is free to leave vertices exposed: augmentation stops as soon
as the best augmenting path no longer has positive gain, which yields a
maximum-weight (not maximum-cardinality) matching.
"""

from __future__ import annotations

import heapq
from typing import Iterable


def max_weight_matching(
    n_left: int, n_right: int, edges: Iterable[tuple[int, int, int]]
) -> tuple[int, list[tuple[int, int]]]:
    """Return ``(total_weight, pairs)`` for a maximum-weight matching.

    ``edges`` are ``(i, j, w)`` triples with ``0 <= i < n_left``,
    ``0 <= j < n_right`` and integer ``w``. Edges of non-positive weight
    can never increase the total and are ignored.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_left)]
    weight_of: dict[tuple[int, int], int] = {}
    for i, j, w in edges:
        if w > 0:
            adj[i].append((j, w))
            weight_of[(i, j)] = w

    match_l = [-1] * n_left
    match_r = [-1] * n_right
    # potentials: h[left] >= every incident weight keeps reduced costs >= 0
    h_l = [max((w for _, w in adj[i]), default=0) for i in range(n_left)]
    h_r = [0] * n_right
    h_s = max(h_l, default=0)
    h_t = 0

    INF = None  # dist sentinel

    while True:
        # Dijkstra over the residual graph with reduced costs.
        dist_l: list = [INF] * n_left
        dist_r: list = [INF] * n_right
        dist_t = INF
        prev_r = [-1] * n_right  # left vertex we came from
        heap: list[tuple[int, int, int]] = []  # (dist, kind, index) kind 0=L 1=R
        for i in range(n_left):
            if match_l[i] == -1:
                rc = h_s - h_l[i]
                if dist_l[i] is INF or rc < dist_l[i]:
                    dist_l[i] = rc
                    heapq.heappush(heap, (rc, 0, i))
        done_l = [False] * n_left
        done_r = [False] * n_right
        while heap:
            d, kind, v = heapq.heappop(heap)
            if kind == 0:
                if done_l[v] or d > dist_l[v]:
                    continue
                done_l[v] = True
                for j, w in adj[v]:
                    if match_l[v] == j:
                        continue
                    nd = d + (-w + h_l[v] - h_r[j])
                    if dist_r[j] is INF or nd < dist_r[j]:
                        dist_r[j] = nd
                        prev_r[j] = v
                        heapq.heappush(heap, (nd, 1, j))
            else:
                if done_r[v] or d > dist_r[v]:
                    continue
                done_r[v] = True
                i = match_r[v]
                if i == -1:
                    if dist_t is INF or d < dist_t:
                        dist_t = d
                else:
                    # residual arc back along the matched edge
                    w = weight_of[(i, v)]
                    nd = d + (w + h_r[v] - h_l[i])
                    if dist_l[i] is INF or nd < dist_l[i]:
                        dist_l[i] = nd
                        heapq.heappush(heap, (nd, 0, i))

        if dist_t is INF:
            break
        true_cost = dist_t - h_s + h_t
        if true_cost >= 0:
            break

        # retrace: find the free right endpoint of the shortest path
        end = min(
            (j for j in range(n_right) if match_r[j] == -1 and dist_r[j] is not INF),
            key=lambda j: dist_r[j],
        )
        # update potentials, capping unreached vertices at dist_t
        for i in range(n_left):
            h_l[i] += dist_t if dist_l[i] is INF else min(dist_l[i], dist_t)
        for j in range(n_right):
            h_r[j] += dist_t if dist_r[j] is INF else min(dist_r[j], dist_t)
        h_t += dist_t

        # flip the alternating path ending at `end`
        j = end
        while j != -1:
            i = prev_r[j]
            nxt = match_l[i]
            match_l[i] = j
            match_r[j] = i
            j = nxt

    pairs = [(i, match_l[i]) for i in range(n_left) if match_l[i] != -1]
    total = sum(weight_of[p] for p in pairs)
    return total, pairs
