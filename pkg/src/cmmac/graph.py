"""Graph and partition-map data model, file I/O, and train/test splitting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

# community id -> member vertex ids; communities may overlap
PartitionMap = dict[str, set[int]]


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed into a graph object."""


class Network:
    """Undirected simple graph over non-negative integer vertex ids.

    Built incrementally by loaders and generators, then treated as read-only
    by every analysis step.
    """

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, set[int]] = {}
        self._n_edges = 0
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def add_vertex(self, v: int) -> None:
        v = int(v)
        if v < 0:
            raise ValueError(f"vertex ids must be non-negative, got {v}")
        self._adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> bool:
        """Add the edge (u, v). Returns False if it already existed."""
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop on vertex {u}")
        self.add_vertex(u)
        self.add_vertex(v)
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._n_edges += 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def vertices(self) -> set[int]:
        return set(self._adj)

    @property
    def num_vertices(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return self._n_edges

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as (low, high) pairs."""
        return sorted((u, v) for u, nbrs in self._adj.items() for v in nbrs if u < v)

    def neighborhood(self, v: int) -> set[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighborhood(v))

    def max_vertex(self) -> int:
        return max(self._adj) if self._adj else -1

    def copy(self) -> Network:
        other = Network()
        other._adj = {v: set(n) for v, n in self._adj.items()}
        other._n_edges = self._n_edges
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Network(|V|={self.num_vertices}, |E|={self.num_edges})"


def degree(g: Network, v: int) -> int:
    return g.degree(v)


def neighborhood(g: Network, v: int) -> set[int]:
    return set(g.neighborhood(v))


def load_edge_list(path: str | Path) -> Network:
    """Read a whitespace-separated edge list; `#` starts a comment."""
    g = Network()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected two vertex ids, got {raw.rstrip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: non-integer vertex id in {raw.rstrip()!r}") from None
            if u < 0 or v < 0:
                raise GraphFormatError(f"{path}:{lineno}: negative vertex id in {raw.rstrip()!r}")
            if u == v:
                raise GraphFormatError(f"{path}:{lineno}: self-loop {raw.rstrip()!r}")
            g.add_edge(u, v)
    return g


def save_edge_list(g: Network, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u}\t{v}\n")


def load_partition_map(path: str | Path) -> PartitionMap:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: malformed JSON ({exc})") from None
    return parse_partition_map(raw, source=str(path))


def parse_partition_map(raw: object, source: str = "<partition map>") -> PartitionMap:
    if not isinstance(raw, dict):
        raise GraphFormatError(f"{source}: expected a JSON object of community id -> vertex list")
    partitions: PartitionMap = {}
    for cid, members in raw.items():
        if not isinstance(members, list):
            raise GraphFormatError(f"{source}: community {cid!r} is not a list")
        if not members:
            raise GraphFormatError(f"{source}: community {cid!r} is empty")
        if not all(isinstance(m, int) and not isinstance(m, bool) and m >= 0 for m in members):
            raise GraphFormatError(f"{source}: community {cid!r} has non-integer or negative members")
        partitions[str(cid)] = set(members)
    return partitions


def save_partition_map(partitions: PartitionMap, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(partition_map_to_json(partitions), fh, indent=1)
        fh.write("\n")


def partition_map_to_json(partitions: PartitionMap) -> dict[str, list[int]]:
    return {cid: sorted(partitions[cid]) for cid in sorted(partitions)}


def validate_partition_map(g: Network, partitions: PartitionMap) -> None:
    for cid, members in partitions.items():
        if not members:
            raise ValueError(f"community {cid!r} is empty")
        missing = [v for v in members if v not in g]
        if missing:
            raise ValueError(f"community {cid!r} lists vertices absent from the network: {sorted(missing)[:5]}")


def split_partition_map(
    partitions: PartitionMap,
    n_train: int,
    anomalous_ids: Iterable[str] = (),
    seed: int = 0,
) -> tuple[PartitionMap, PartitionMap]:
    """Split communities into disjoint train and test maps.

    The train map is drawn uniformly from normal communities only; every
    anomalous community lands in the test map. Vertices may appear on both
    sides.
    """
    anomalous = set(anomalous_ids)
    unknown = anomalous - partitions.keys()
    if unknown:
        raise ValueError(f"anomalous ids not in the partition map: {sorted(unknown)}")
    if n_train < 0 or n_train >= len(partitions):
        raise ValueError(f"n_train={n_train} must be in [0, {len(partitions)})")
    normal = sorted(cid for cid in partitions if cid not in anomalous)
    if n_train > len(normal):
        raise ValueError(f"n_train={n_train} exceeds the {len(normal)} normal communities")
    rng = np.random.default_rng(seed)
    chosen = {normal[i] for i in rng.permutation(len(normal))[:n_train]}
    train = {cid: set(partitions[cid]) for cid in sorted(chosen)}
    test = {cid: set(partitions[cid]) for cid in sorted(partitions) if cid not in chosen}
    return train, test


@dataclass
class LabeledDataset:
    network: Network
    partitions: PartitionMap
    anomalous_ids: set[str] = field(default_factory=set)
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        extra = set(self.anomalous_ids) - self.partitions.keys()
        if extra:
            raise ValueError(f"anomalous ids not in partitions: {sorted(extra)}")

    @property
    def normal_ids(self) -> list[str]:
        return sorted(cid for cid in self.partitions if cid not in self.anomalous_ids)


def save_dataset(ds: LabeledDataset, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_edge_list(ds.network, out / "edges.txt")
    save_partition_map(ds.partitions, out / "partitions.json")
    with open(out / "labels.json", "w", encoding="utf-8") as fh:
        json.dump({"anomalous": sorted(ds.anomalous_ids)}, fh, indent=1)
        fh.write("\n")
    with open(out / "params.json", "w", encoding="utf-8") as fh:
        json.dump(ds.params, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return out


def load_labels(path: str | Path) -> set[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(raw, dict) or not isinstance(raw.get("anomalous"), list):
        raise GraphFormatError(f'{path}: expected {{"anomalous": [...]}}')
    return {str(c) for c in raw["anomalous"]}


def load_dataset(in_dir: str | Path, require_labels: bool = True) -> LabeledDataset:
    """Load a dataset directory.

    Vertices listed only in the partition map (isolated in the edge list) are
    added to the network.
    """
    d = Path(in_dir)
    network = load_edge_list(d / "edges.txt")
    partitions = load_partition_map(d / "partitions.json")
    for members in partitions.values():
        for v in members:
            network.add_vertex(v)
    labels_path = d / "labels.json"
    if labels_path.exists():
        anomalous = load_labels(labels_path)
    elif require_labels:
        raise FileNotFoundError(f"{labels_path} not found")
    else:
        anomalous = set()
    params = {}
    if (d / "params.json").exists():
        with open(d / "params.json", encoding="utf-8") as fh:
            params = json.load(fh)
    return LabeledDataset(network, partitions, anomalous, params)
