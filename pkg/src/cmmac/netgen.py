"""Community-structured random networks with dual-preferential interconnection.

Each group of communities (normal, anomalous) is first created as disjoint
random subnetworks, then every community in the group sends
``floor(|V^c| * inter_p)`` edges to normal communities: the target community
is drawn proportionally to its size, the target vertex proportionally to its
current degree, and the source vertex joins the target community.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .graph import LabeledDataset, Network, PartitionMap

BARABASI_ALBERT = "barabasi_albert"
ERDOS_RENYI = "erdos_renyi"
GENERATORS = (BARABASI_ALBERT, ERDOS_RENYI)
SIZE_MODES = ("q0", "q0.1", "q0.25", "q0.5", "random")

MAX_REDRAWS = 10


@dataclass
class GroupParams:
    alg: str
    comm_sizes: list[int] = field(default_factory=list)
    args: float = 1
    inter_p: float = 0.0

    def validate(self) -> None:
        if self.alg not in GENERATORS:
            raise ValueError(f"unknown generator {self.alg!r}; expected one of {GENERATORS}")
        if not 0.0 <= self.inter_p <= 1.0:
            raise ValueError(f"inter_p must lie in [0, 1], got {self.inter_p}")
        if any(int(s) != s or s < 1 for s in self.comm_sizes):
            raise ValueError(f"community sizes must be positive integers, got {self.comm_sizes}")
        if self.alg == BARABASI_ALBERT:
            if int(self.args) != self.args or self.args < 1:
                raise ValueError(f"Barabasi-Albert needs an integer m >= 1, got {self.args}")
            small = [s for s in self.comm_sizes if s <= self.args]
            if small:
                raise ValueError(f"Barabasi-Albert sizes must exceed m={self.args}, got {small}")
        elif not 0.0 <= self.args <= 1.0:
            raise ValueError(f"Erdos-Renyi edge probability must lie in [0, 1], got {self.args}")

    @classmethod
    def from_dict(cls, raw: dict) -> GroupParams:
        return cls(
            alg=raw["alg"],
            comm_sizes=[int(s) for s in raw.get("comm_sizes", [])],
            args=raw.get("args", 1),
            inter_p=float(raw.get("inter_p", 0.0)),
        )


@dataclass
class GeneratorSpec:
    normal: GroupParams
    anomalous: GroupParams
    seed: int = 0

    @classmethod
    def from_dict(cls, raw: dict) -> GeneratorSpec:
        anomalous = raw.get("anomalous") or {"alg": ERDOS_RENYI, "comm_sizes": [], "args": 0.0}
        return cls(
            normal=GroupParams.from_dict(raw["normal"]),
            anomalous=GroupParams.from_dict(anomalous),
            seed=int(raw.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        return {"normal": asdict(self.normal), "anomalous": asdict(self.anomalous), "seed": self.seed}


@dataclass
class InterconnectStats:
    added: int = 0
    redraws: int = 0
    skipped: int = 0

    def __iadd__(self, other: InterconnectStats) -> InterconnectStats:
        self.added += other.added
        self.redraws += other.redraws
        self.skipped += other.skipped
        return self


def generate_ba_community(size: int, m: int, rng: np.random.Generator) -> Network:
    """Barabasi-Albert growth from a star seed on vertices 0..m."""
    if m < 1 or size <= m:
        raise ValueError(f"Barabasi-Albert needs size > m >= 1, got size={size}, m={m}")
    g = Network(range(size))
    # every edge endpoint appears once in `ends`, so uniform draws are degree-proportional
    ends: list[int] = []
    for v in range(1, m + 1):
        g.add_edge(0, v)
        ends += [0, v]
    for new in range(m + 1, size):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(ends[rng.integers(len(ends))])
        for t in sorted(targets):
            g.add_edge(new, t)
            ends += [new, t]
    return g


def generate_er_community(size: int, p: float, rng: np.random.Generator) -> Network:
    if size < 1 or not 0.0 <= p <= 1.0:
        raise ValueError(f"Erdos-Renyi needs size >= 1 and p in [0, 1], got size={size}, p={p}")
    g = Network(range(size))
    rows, cols = np.triu_indices(size, k=1)
    keep = rng.random(rows.size) < p
    for u, v in zip(rows[keep].tolist(), cols[keep].tolist()):
        g.add_edge(u, v)
    return g


def create_community(alg: str, size: int, args: float, rng: np.random.Generator) -> Network:
    if alg == BARABASI_ALBERT:
        return generate_ba_community(size, int(args), rng)
    if alg == ERDOS_RENYI:
        return generate_er_community(size, float(args), rng)
    raise ValueError(f"unknown generator {alg!r}")


def sample_sizes(distribution: Sequence[int], mode: str, k: int, rng: np.random.Generator) -> list[int]:
    """Draw ``k`` community sizes from an empirical size distribution.

    ``q<x>`` repeats the lower nearest-rank x-quantile; ``random`` draws
    uniformly with replacement.
    """
    if not len(distribution):
        raise ValueError("empty size distribution")
    ordered = sorted(int(s) for s in distribution)
    if mode == "random":
        return [ordered[i] for i in rng.integers(len(ordered), size=k)]
    if not mode.startswith("q"):
        raise ValueError(f"unknown size mode {mode!r}")
    q = float(mode[1:])
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile out of range in {mode!r}")
    return [ordered[math.floor(q * (len(ordered) - 1))]] * k


def _merge(g: Network, sub: Network, offset: int) -> list[int]:
    for v in sub.vertices:
        g.add_vertex(v + offset)
    for u, v in sub.edges():
        g.add_edge(u + offset, v + offset)
    return sorted(v + offset for v in sub.vertices)


def choose_weighted(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to ``weights`` (uniform if all zero)."""
    total = weights.sum()
    if total <= 0:
        return int(rng.integers(len(weights)))
    return int(np.searchsorted(np.cumsum(weights), rng.random() * total, side="right"))


def interconnect(
    g: Network,
    partitions: PartitionMap,
    source_comm: str,
    source_vertices: Sequence[int],
    inter_p: float,
    targets: dict[str, Sequence[int]],
    target_sizes: dict[str, int],
    rng: np.random.Generator,
) -> InterconnectStats:
    """Dual-preferential interconnection of one community toward normal communities.

    ``targets`` maps each candidate community to the vertices eligible as edge
    endpoints; ``target_sizes`` gives the size weights. The source community is
    never its own target. A draw that would duplicate an existing edge is
    redrawn up to ``MAX_REDRAWS`` times before the iteration is skipped.
    """
    stats = InterconnectStats()
    n_links = math.floor(len(source_vertices) * inter_p)
    candidates = [cid for cid in sorted(targets) if cid != source_comm and len(targets[cid])]
    if n_links == 0 or not candidates:
        return stats
    weights = np.array([target_sizes[cid] for cid in candidates], dtype=float)
    for _ in range(n_links):
        u = source_vertices[rng.integers(len(source_vertices))]
        other = candidates[choose_weighted(weights, rng)]
        pool = targets[other]
        degrees = np.array([g.degree(v) for v in pool], dtype=float)
        for attempt in range(MAX_REDRAWS + 1):
            v = pool[choose_weighted(degrees, rng)]
            if v != u and not g.has_edge(u, v):
                break
            if attempt < MAX_REDRAWS:
                stats.redraws += 1
        else:
            stats.skipped += 1
            continue
        g.add_edge(u, v)
        partitions[other].add(u)
        stats.added += 1
    return stats


def _community_ids(n: int, rng: np.random.Generator) -> list[str]:
    # ids carry no group information, so id-order tie breaks stay label-neutral
    width = max(2, len(str(n - 1)))
    return [f"c{i:0{width}d}" for i in rng.permutation(n)]


def generate(spec: GeneratorSpec) -> LabeledDataset:
    """Fully-simulated network: normal communities, then anomalous ones."""
    spec.normal.validate()
    spec.anomalous.validate()
    if not spec.normal.comm_sizes:
        raise ValueError("fully-simulated mode needs at least one normal community")
    normal_rng, anom_rng, id_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(3))
    n_norm, n_anom = len(spec.normal.comm_sizes), len(spec.anomalous.comm_sizes)
    ids = _community_ids(n_norm + n_anom, id_rng)

    g = Network()
    partitions: PartitionMap = {}
    generated: dict[str, list[int]] = {}
    stats = InterconnectStats()
    normal_ids = ids[:n_norm]
    anomalous_ids = ids[n_norm:]
    for group, cids, rng in ((spec.normal, normal_ids, normal_rng), (spec.anomalous, anomalous_ids, anom_rng)):
        for cid, size in zip(cids, group.comm_sizes):
            sub = create_community(group.alg, size, group.args, rng)
            members = _merge(g, sub, g.max_vertex() + 1)
            generated[cid] = members
            partitions[cid] = set(members)
        normal_targets = {cid: generated[cid] for cid in normal_ids}
        normal_sizes = dict(zip(normal_ids, spec.normal.comm_sizes))
        for cid in cids:
            stats += interconnect(
                g, partitions, cid, generated[cid], group.inter_p, normal_targets, normal_sizes, rng
            )

    params = spec.to_dict()
    params.update(
        mode="simulated",
        normal_ids=normal_ids,
        interconnect_added=stats.added,
        interconnect_redraws=stats.redraws,
        skipped_duplicates=stats.skipped,
    )
    return LabeledDataset(g, partitions, set(anomalous_ids), params)


def infuse(
    base: Network,
    base_partitions: PartitionMap,
    anomalous: GroupParams,
    seed: int = 0,
    base_params: dict | None = None,
) -> LabeledDataset:
    """Attach generated anomalous communities to an existing network.

    Anomalous vertices get fresh ids above the base maximum; each anomalous
    community then interconnects toward the base communities only.
    """
    anomalous.validate()
    if not base_partitions:
        raise ValueError("infusion needs a non-empty base partition map")
    gen_rng, id_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    g = base.copy()
    partitions: PartitionMap = {cid: set(m) for cid, m in base_partitions.items()}
    base_ids = sorted(base_partitions)
    targets = {cid: sorted(base_partitions[cid]) for cid in base_ids}
    target_sizes = {cid: len(base_partitions[cid]) for cid in base_ids}

    n_anom = len(anomalous.comm_sizes)
    width = max(2, len(str(max(n_anom - 1, 0))))
    new_ids = [f"anom{i:0{width}d}" for i in id_rng.permutation(n_anom)] if n_anom else []
    collisions = set(new_ids) & set(partitions)
    if collisions:
        raise ValueError(f"generated community ids collide with base ids: {sorted(collisions)}")

    generated: dict[str, list[int]] = {}
    for cid, size in zip(new_ids, anomalous.comm_sizes):
        sub = create_community(anomalous.alg, size, anomalous.args, gen_rng)
        members = _merge(g, sub, g.max_vertex() + 1)
        generated[cid] = members
        partitions[cid] = set(members)
    stats = InterconnectStats()
    for cid in new_ids:
        stats += interconnect(g, partitions, cid, generated[cid], anomalous.inter_p, targets, target_sizes, gen_rng)

    params = {
        "mode": "infusion",
        "anomalous": asdict(anomalous),
        "seed": seed,
        "base": base_params or {},
        "interconnect_added": stats.added,
        "interconnect_redraws": stats.redraws,
        "skipped_duplicates": stats.skipped,
    }
    return LabeledDataset(g, partitions, set(new_ids), params)
