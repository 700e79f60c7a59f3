"""Topological features of (regular vertex, community) pairs in a BipartiteView.

With ``mask=True`` an existing membership edge is removed before its
features are measured, so positive and negative training pairs are
described by the same surrounding structure.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bipartite import BipartiteView

FEATURE_ORDER = ("d_v", "d_c", "tf", "pa", "fm", "sp")
CSV_HEADER = ("v", "c", *FEATURE_ORDER, "label")


@dataclass(frozen=True)
class EdgeFeatureRow:
    v: int
    c: str
    d_v: int
    d_c: int
    tf: int
    pa: int
    fm: int
    sp: int
    label: int | None = None

    def vector(self) -> list[int]:
        return [self.d_v, self.d_c, self.tf, self.pa, self.fm, self.sp]


def _check(bpg: BipartiteView, v: int, c: str) -> None:
    if v not in bpg.memberships:
        raise KeyError(f"unknown regular vertex {v}")
    if c not in bpg.members:
        raise KeyError(f"unknown community {c!r}")


def _masked(bpg: BipartiteView, v: int, c: str, mask: bool) -> bool:
    return mask and c in bpg.memberships[v]


def vertex_degree(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    _check(bpg, v, c)
    return len(bpg.memberships[v]) - _masked(bpg, v, c, mask)


def community_degree(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    _check(bpg, v, c)
    return len(bpg.members[c]) - _masked(bpg, v, c, mask)


def total_friends(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    # the two neighborhoods sit on opposite sides, so their union is disjoint
    return vertex_degree(bpg, v, c, mask) + community_degree(bpg, v, c, mask)


def preferential_attachment(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    return vertex_degree(bpg, v, c, mask) * community_degree(bpg, v, c, mask)


def friends_measure(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    """Number of membership edges between the neighborhoods of ``v`` and ``c``.

    Equals the summed overlap of ``c`` with every community of ``v``.
    """
    _check(bpg, v, c)
    overlaps = bpg.overlaps
    if _masked(bpg, v, c, mask):
        # v leaves c: drop the x == c term and v's own contribution to each other overlap
        return sum(overlaps[x][c] - 1 for x in bpg.memberships[v] if x != c)
    return sum(overlaps[x].get(c, 0) for x in bpg.memberships[v])


def _community_distances(bpg: BipartiteView, c: str) -> dict[str, int]:
    cache = bpg.__dict__.setdefault("_sp_cache", {})
    if c not in cache:
        overlaps = bpg.overlaps
        dist = {c: 0}
        queue = deque([c])
        while queue:
            a = queue.popleft()
            for b in overlaps[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        cache[c] = dist
    return cache[c]


def shortest_path(bpg: BipartiteView, v: int, c: str, mask: bool = False) -> int:
    """BFS distance between ``v`` and the vertex of ``c``, or -1 if unreachable.

    Every path leaves ``v`` through one of its communities and then hops
    between communities through shared members, two edges per hop, so the
    search runs on the community-overlap graph.
    """
    _check(bpg, v, c)
    comms = bpg.memberships[v]
    if c in comms and not mask:
        return 1
    sources = comms - {c}
    if not sources:
        return -1
    if c not in comms:
        dist = _community_distances(bpg, c)
        hops = min((dist[x] for x in sources if x in dist), default=None)
        return -1 if hops is None else 1 + 2 * hops

    overlaps = bpg.overlaps
    dist = {c: 0}
    queue = deque([c])
    while queue:
        a = queue.popleft()
        for b, shared in overlaps[a].items():
            if b in dist:
                continue
            if a == c and b in sources:
                # v no longer links c to its other communities
                shared -= 1
            if shared <= 0:
                continue
            if b in sources:
                return 1 + 2 * (dist[a] + 1)
            dist[b] = dist[a] + 1
            queue.append(b)
    return -1


def feature_row(bpg: BipartiteView, v: int, c: str, label: int | None = None, mask: bool = False) -> EdgeFeatureRow:
    d_v = vertex_degree(bpg, v, c, mask)
    d_c = community_degree(bpg, v, c, mask)
    return EdgeFeatureRow(
        v=v,
        c=c,
        d_v=d_v,
        d_c=d_c,
        tf=d_v + d_c,
        pa=d_v * d_c,
        fm=friends_measure(bpg, v, c, mask),
        sp=shortest_path(bpg, v, c, mask),
        label=label,
    )


def feature_rows(
    bpg: BipartiteView,
    pairs: Iterable[tuple[int, str]],
    label: int | None = None,
    mask: bool = False,
) -> list[EdgeFeatureRow]:
    return [feature_row(bpg, v, c, label, mask) for v, c in pairs]


def feature_matrix(rows: Sequence[EdgeFeatureRow]) -> np.ndarray:
    if not rows:
        return np.empty((0, len(FEATURE_ORDER)))
    return np.array([r.vector() for r in rows], dtype=float)


def write_feature_csv(rows: Iterable[EdgeFeatureRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([r.v, r.c, *r.vector(), "" if r.label is None else r.label])
