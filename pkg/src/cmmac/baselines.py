"""Topology-based community scores computed on the original network."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Collection, Mapping

from .graph import Network, PartitionMap
from .metafeatures import rank_scores

BASELINES = (
    "average_degree",
    "cut_ratio",
    "conductance",
    "flake_odf",
    "average_odf",
    "unattributed_amen",
)

# True: a high score marks an anomalous community. The default treats
# anomalies as unusually tight groups (dense, few boundary edges).
DENSE_ANOMALY_POLARITY = {
    "average_degree": True,
    "cut_ratio": False,
    "conductance": False,
    "flake_odf": False,
    "average_odf": False,
    "unattributed_amen": True,
}
# anomalies as sparse, boundary-heavy groups
SPARSE_ANOMALY_POLARITY = {m: not high for m, high in DENSE_ANOMALY_POLARITY.items()}
POLARITIES = {"dense": DENSE_ANOMALY_POLARITY, "sparse": SPARSE_ANOMALY_POLARITY}


@dataclass
class CommunityContext:
    members: frozenset[int]
    internal_edges: int
    cut: int
    internal_degree: dict[int, int]
    external_degree: dict[int, int]
    boundary_vertices: set[int]

    @property
    def member_degrees(self) -> list[int]:
        return [self.internal_degree[v] + self.external_degree[v] for v in sorted(self.members)]


def community_context(g: Network, members: Collection[int]) -> CommunityContext:
    members = frozenset(members)
    if not members:
        raise ValueError("empty community")
    internal, external = {}, {}
    boundary: set[int] = set()
    for v in members:
        nbrs = g.neighborhood(v)
        inside = sum(1 for u in nbrs if u in members)
        internal[v] = inside
        external[v] = len(nbrs) - inside
        boundary.update(u for u in nbrs if u not in members)
    return CommunityContext(
        members=members,
        internal_edges=sum(internal.values()) // 2,
        cut=sum(external.values()),
        internal_degree=internal,
        external_degree=external,
        boundary_vertices=boundary,
    )


def average_degree(g: Network, members: Collection[int]) -> float:
    if not members:
        raise ValueError("empty community")
    return sum(g.degree(v) for v in members) / len(members)


def cut_ratio(g: Network, members: Collection[int], n_total: int | None = None) -> float:
    ctx = community_context(g, members)
    n_total = g.num_vertices if n_total is None else n_total
    possible = len(ctx.members) * (n_total - len(ctx.members))
    return ctx.cut / possible if possible else 0.0


def conductance(g: Network, members: Collection[int]) -> float:
    ctx = community_context(g, members)
    volume = 2 * ctx.internal_edges + ctx.cut
    return ctx.cut / volume if volume else 0.0


def flake_odf(g: Network, members: Collection[int]) -> float:
    """Fraction of members with strictly more edges leaving than staying."""
    ctx = community_context(g, members)
    return sum(ctx.external_degree[v] > ctx.internal_degree[v] for v in ctx.members) / len(ctx.members)


def average_odf(g: Network, members: Collection[int]) -> float:
    ctx = community_context(g, members)
    total = 0.0
    for v in ctx.members:
        d = ctx.internal_degree[v] + ctx.external_degree[v]
        if d:
            total += ctx.external_degree[v] / d
    return total / len(ctx.members)


def unattributed_amen(g: Network, members: Collection[int]) -> float:
    """Normality score: modularity-style internal term over ordered member pairs
    minus a boundary term over existing cut edges."""
    ctx = community_context(g, members)
    two_m = 2 * g.num_edges
    if two_m == 0:
        raise ValueError("normality score needs a graph with at least one edge")
    degrees = {v: ctx.internal_degree[v] + ctx.external_degree[v] for v in ctx.members}
    k_sum = sum(degrees.values())
    k_sq = sum(k * k for k in degrees.values())
    # ordered pairs i != j: sum A_ij = 2 * internal edges
    internal = 2 * ctx.internal_edges - (k_sum * k_sum - k_sq) / two_m
    boundary = 0.0
    for v in ctx.members:
        for b in g.neighborhood(v):
            if b not in ctx.members:
                boundary += 1.0 - min(1.0, degrees[v] * g.degree(b) / two_m)
    return internal - boundary


SCORERS: dict[str, Callable[[Network, Collection[int]], float]] = {
    "average_degree": average_degree,
    "cut_ratio": cut_ratio,
    "conductance": conductance,
    "flake_odf": flake_odf,
    "average_odf": average_odf,
    "unattributed_amen": unattributed_amen,
}


def baseline_scores(g: Network, partitions: PartitionMap, method: str) -> dict[str, float]:
    if method not in SCORERS:
        raise ValueError(f"unknown baseline {method!r}; expected one of {BASELINES}")
    scorer = SCORERS[method]
    return {cid: scorer(g, partitions[cid]) for cid in sorted(partitions)}


def rank_by_baseline(
    g: Network,
    partitions: PartitionMap,
    method: str,
    polarity: Mapping[str, bool] = DENSE_ANOMALY_POLARITY,
) -> list[str]:
    """Community ids, most anomalous first under ``polarity``; ties by id."""
    scores = baseline_scores(g, partitions, method)
    return rank_scores(scores, anomalous_high=polarity[method])


def score_all(g: Network, members: Collection[int]) -> dict[str, float]:
    """All six scores from one pass over the community's neighborhoods."""
    ctx = community_context(g, members)
    n = len(ctx.members)
    degrees = {v: ctx.internal_degree[v] + ctx.external_degree[v] for v in ctx.members}
    volume = 2 * ctx.internal_edges + ctx.cut
    possible = n * (g.num_vertices - n)
    two_m = 2 * g.num_edges
    if two_m == 0:
        raise ValueError("normality score needs a graph with at least one edge")
    k_sum = sum(degrees.values())
    k_sq = sum(k * k for k in degrees.values())
    boundary = 0.0
    for v in ctx.members:
        for b in g.neighborhood(v):
            if b not in ctx.members:
                boundary += 1.0 - min(1.0, degrees[v] * g.degree(b) / two_m)
    return {
        "average_degree": k_sum / n,
        "cut_ratio": ctx.cut / possible if possible else 0.0,
        "conductance": ctx.cut / volume if volume else 0.0,
        "flake_odf": sum(ctx.external_degree[v] > ctx.internal_degree[v] for v in ctx.members) / n,
        "average_odf": sum(ctx.external_degree[v] / degrees[v] for v in ctx.members if degrees[v]) / n,
        "unattributed_amen": 2 * ctx.internal_edges - (k_sum * k_sum - k_sq) / two_m - boundary,
    }
