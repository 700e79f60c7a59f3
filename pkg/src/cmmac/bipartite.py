"""Co-membership bipartite graph: regular vertices on one side, one
community-representing vertex per community on the other."""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Network, PartitionMap, validate_partition_map

COMMUNITY_PREFIX = "c::"


class BipartiteView:
    """Membership edges only; edges of the original network are not carried over.

    ``members[c]`` is the neighborhood of the community-representing vertex of
    ``c``; ``memberships[v]`` is the neighborhood of regular vertex ``v``.
    """

    def __init__(self, regular_vertices: Iterable[int], partitions: PartitionMap):
        self.members: dict[str, frozenset[int]] = {cid: frozenset(partitions[cid]) for cid in sorted(partitions)}
        memberships: dict[int, set[str]] = {v: set() for v in regular_vertices}
        for cid, mem in self.members.items():
            for v in mem:
                memberships.setdefault(v, set()).add(cid)
        self.memberships: dict[int, frozenset[str]] = {v: frozenset(c) for v, c in memberships.items()}

    @property
    def regular_vertices(self) -> set[int]:
        return set(self.memberships)

    @property
    def communities(self) -> list[str]:
        return list(self.members)

    @property
    def num_edges(self) -> int:
        return sum(len(m) for m in self.members.values())

    def has_edge(self, v: int, cid: str) -> bool:
        return cid in self.memberships.get(v, ())

    def degree_regular(self, v: int) -> int:
        try:
            return len(self.memberships[v])
        except KeyError:
            raise KeyError(f"unknown regular vertex {v}") from None

    def degree_community(self, cid: str) -> int:
        try:
            return len(self.members[cid])
        except KeyError:
            raise KeyError(f"unknown community {cid!r}") from None

    @cached_property
    def community_vertices(self) -> dict[str, int]:
        """Integer ids for community-representing vertices, above every regular id."""
        base = max(self.memberships, default=-1) + 1
        return {cid: base + i for i, cid in enumerate(self.members)}

    @cached_property
    def graph(self) -> Network:
        g = Network(self.memberships)
        for cid, cv in self.community_vertices.items():
            g.add_vertex(cv)
            for v in self.members[cid]:
                g.add_edge(v, cv)
        return g

    @cached_property
    def overlaps(self) -> dict[str, dict[str, int]]:
        """``overlaps[a][b] = |a ∩ b|``, including ``overlaps[a][a] = |a|``; zero entries omitted."""
        table: dict[str, dict[str, int]] = {cid: defaultdict(int) for cid in self.members}
        for comms in self.memberships.values():
            ordered = sorted(comms)
            for i, a in enumerate(ordered):
                table[a][a] += 1
                for b in ordered[i + 1:]:
                    table[a][b] += 1
                    table[b][a] += 1
        return {cid: dict(row) for cid, row in table.items()}

    def __repr__(self) -> str:
        return f"BipartiteView(regular={len(self.memberships)}, communities={len(self.members)}, edges={self.num_edges})"


def build_bipartite(g: Network, partitions: PartitionMap) -> BipartiteView:
    validate_partition_map(g, partitions)
    return BipartiteView(g.vertices, partitions)


def candidate_edges(bpg: BipartiteView, communities: Iterable[str]) -> list[tuple[int, str]]:
    """Existing membership edges of the listed communities, in community then vertex order."""
    pairs = []
    for cid in communities:
        if cid not in bpg.members:
            raise KeyError(f"unknown community {cid!r}")
        pairs.extend((v, cid) for v in sorted(bpg.members[cid]))
    return pairs


def sample_negative_edges(
    bpg: BipartiteView,
    k: int,
    rng: np.random.Generator,
    min_vertex_degree: int = 0,
) -> list[tuple[int, str]]:
    """``k`` distinct absent (regular, community) pairs drawn uniformly.

    Only regular vertices with at least ``min_vertex_degree`` memberships are
    eligible.
    """
    vertices = sorted(v for v, c in bpg.memberships.items() if len(c) >= min_vertex_degree)
    comms = bpg.communities
    n_comm = len(comms)
    total = len(vertices) * n_comm - sum(len(bpg.memberships[v]) for v in vertices)
    if k < 0 or k > total:
        raise ValueError(f"requested {k} non-edges but only {total} exist")
    if k == 0:
        return []
    chosen: set[tuple[int, str]] = set()
    out: list[tuple[int, str]] = []
    if k > total // 2:
        # dense request: enumerate the complement and subsample
        pool = [(v, c) for v in vertices for c in comms if c not in bpg.memberships[v]]
        return [pool[i] for i in sorted(rng.choice(len(pool), size=k, replace=False))]
    while len(out) < k:
        v = vertices[rng.integers(len(vertices))]
        c = comms[rng.integers(n_comm)]
        if c in bpg.memberships[v] or (v, c) in chosen:
            continue
        chosen.add((v, c))
        out.append((v, c))
    return out


def dump_bipartite(bpg: BipartiteView, path: str | Path) -> None:
    """Debug edge list; community-representing vertices carry the ``c::`` prefix."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, cid in candidate_edges(bpg, bpg.communities):
            fh.write(f"{v}\t{COMMUNITY_PREFIX}{cid}\n")
