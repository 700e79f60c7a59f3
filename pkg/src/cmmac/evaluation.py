"""Train/test protocol, average precision, and the parameter-grid sweep."""

from __future__ import annotations

import csv
import itertools
import json
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import baselines as bl
from .bipartite import build_bipartite, candidate_edges
from .classifier import build_training_set, predict_proba, train
from .features import feature_rows
from .graph import LabeledDataset, PartitionMap, load_dataset, split_partition_map
from .metafeatures import META_FEATURES, REPORTING_META_FEATURE, rank_scores, score_community
from .netgen import BARABASI_ALBERT, ERDOS_RENYI, GeneratorSpec, GroupParams, generate, infuse, sample_sizes

METHODS = META_FEATURES + bl.BASELINES
RESULT_COLUMNS = ("cell_id", "args_anom", "inter_p_anom", "size_mode", "seed", "method", "ap")


@dataclass
class RankedResult:
    method: str
    order: list[str]  # most anomalous first
    anomalous: set[str]

    def __post_init__(self) -> None:
        if len(set(self.order)) != len(self.order):
            raise ValueError("ranking contains duplicate ids")
        missing = self.anomalous - set(self.order)
        if missing:
            raise ValueError(f"anomalous ids missing from ranking: {sorted(missing)}")


def average_precision(r: RankedResult) -> float:
    """Mean of precision@k over the ranks k holding an anomalous community."""
    if not r.anomalous:
        raise ValueError("average precision needs at least one anomalous community")
    hits = 0
    total = 0.0
    for k, cid in enumerate(r.order, start=1):
        if cid in r.anomalous:
            hits += 1
            total += hits / k
    return total / len(r.anomalous)


def mean_average_precision(results: Sequence[RankedResult]) -> float:
    if not results:
        raise ValueError("no results to average")
    return float(np.mean([average_precision(r) for r in results]))


def minimum_average_precision(n: int, n_pos: int) -> float:
    """AP when every anomaly sits at the very end of an n-long ranking."""
    return sum(i / (n - n_pos + i) for i in range(1, n_pos + 1)) / n_pos


@dataclass
class ExperimentConfig:
    n_train: int = 6
    threshold: float = 0.5
    learner: str = "gbdt"
    hyper: dict | None = None
    mask: bool = True
    seed: int = 0
    polarity: str = "dense"
    family: str = "simulated"


@dataclass
class ExperimentResult:
    scorecards: list[dict]
    rankings: dict[str, RankedResult]
    ap: dict[str, float]
    training_meta: dict = field(default_factory=dict)

    @property
    def reporting_method(self) -> str:
        return self.training_meta.get("reporting_method", META_FEATURES[1])


def score_partitions(
    ds_network,
    train_map: PartitionMap,
    test_map: PartitionMap,
    config: ExperimentConfig,
) -> tuple[list[dict], dict]:
    """Scorecards (meta-features and baselines) for every test community."""
    train_bpg = build_bipartite(ds_network, train_map)
    test_bpg = build_bipartite(ds_network, test_map)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
    ts = build_training_set(train_bpg, rng, mask=config.mask)
    lp = train(ts, config.hyper, seed=config.seed, kind=config.learner)

    pairs = candidate_edges(test_bpg, test_bpg.communities)
    probs = predict_proba(lp, feature_rows(test_bpg, pairs, mask=config.mask))
    by_comm: dict[str, list[float]] = defaultdict(list)
    for (_, cid), p in zip(pairs, probs.tolist()):
        by_comm[cid].append(p)

    cards = []
    for cid in sorted(test_map):
        card = {"community": cid, "member_count": len(test_map[cid])}
        card.update(score_community(by_comm[cid], config.threshold))
        card.update(bl.score_all(ds_network, test_map[cid]))
        cards.append(card)
    meta = dict(lp.training_meta, learner=lp.kind, n_train_rows=len(ts.rows))
    return cards, meta


def rank_cards(cards: Sequence[dict], polarity: str = "dense") -> dict[str, list[str]]:
    pol = bl.POLARITIES[polarity]
    orders = {}
    for method in METHODS:
        scores = {card["community"]: card[method] for card in cards}
        orders[method] = rank_scores(scores, anomalous_high=method in pol and pol[method])
    return orders


def attach_ranks(cards: Sequence[dict], orders: dict[str, list[str]]) -> None:
    for method, order in orders.items():
        pos = {cid: i for i, cid in enumerate(order, start=1)}
        for card in cards:
            card[f"rank_{method}"] = pos[card["community"]]


def run_experiment(ds: LabeledDataset, config: ExperimentConfig | None = None) -> ExperimentResult:
    """Split, train on the train BPG, score the test communities, and rank by every method."""
    config = config or ExperimentConfig()
    if not ds.anomalous_ids:
        raise ValueError("dataset has no anomalous labels")
    train_map, test_map = split_partition_map(ds.partitions, config.n_train, ds.anomalous_ids, config.seed)
    cards, meta = score_partitions(ds.network, train_map, test_map, config)
    orders = rank_cards(cards, config.polarity)
    attach_ranks(cards, orders)
    anomalous = set(ds.anomalous_ids) & test_map.keys()
    for card in cards:
        card["label"] = int(card["community"] in anomalous)
    rankings = {m: RankedResult(m, order, anomalous) for m, order in orders.items()}
    ap = {m: average_precision(r) for m, r in rankings.items()}
    meta["reporting_method"] = REPORTING_META_FEATURE[config.family]
    return ExperimentResult(cards, rankings, ap, meta)


SCORECARD_FIXED = ("community", "label", "member_count")


def write_scorecards(cards: Sequence[dict], path: str | Path) -> None:
    columns = [c for c in SCORECARD_FIXED if cards and c in cards[0]]
    columns += list(METHODS) + [f"rank_{m}" for m in METHODS if cards and f"rank_{m}" in cards[0]]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for card in cards:
            writer.writerow([_fmt(card[c]) for c in columns])


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def resolve_methods(names: Iterable[str] | None, family: str = "simulated") -> list[str]:
    """Expand a user method list; ``cmmac`` stands for the family's reporting meta-feature."""
    if not names:
        return list(METHODS)
    out = []
    for name in names:
        name = REPORTING_META_FEATURE[family] if name == "cmmac" else name
        if name not in METHODS:
            raise ValueError(f"unknown method {name!r}; expected cmmac or one of {METHODS}")
        if name not in out:
            out.append(name)
    return out


@dataclass
class SweepSpec:
    args_anom: list[float]
    inter_p_anom: list[float]
    size_modes: list[str]
    seeds: list[int]
    mode: str = "simulated"
    n_normal: int = 20
    normal_size_range: tuple[int, int] = (30, 100)
    normal_m: int = 1
    inter_p_norm: float = 0.075
    n_anomalous: int = 3
    n_train: int = 6
    threshold: float = 0.5
    learner: str = "gbdt"
    mask: bool = True
    polarity: str = "dense"
    base_dir: str | None = None

    def validate(self) -> None:
        if not (self.args_anom and self.inter_p_anom and self.size_modes and self.seeds):
            raise ValueError("sweep grid is empty")
        if self.mode not in ("simulated", "infusion"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        if self.mode == "infusion" and not self.base_dir:
            raise ValueError("infusion sweeps need base_dir")

    def cells(self) -> list[tuple[float, float, str]]:
        return [
            (a, p, s)
            for a in self.args_anom
            for s in self.size_modes
            for p in self.inter_p_anom
        ]

    @classmethod
    def from_dict(cls, raw: dict) -> SweepSpec:
        raw = dict(raw)
        if "normal_size_range" in raw:
            raw["normal_size_range"] = tuple(raw["normal_size_range"])
        return cls(**raw)

    def to_dict(self) -> dict:
        return asdict(self)


def cell_id(args_anom: float, inter_p_anom: float, size_mode: str) -> str:
    return f"a{args_anom:g}_p{inter_p_anom:g}_{size_mode}"


def normal_sizes(spec: SweepSpec, seed: int) -> list[int]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, 11]))
    lo, hi = spec.normal_size_range
    return rng.integers(lo, hi + 1, size=spec.n_normal).tolist()


def build_cell_dataset(spec: SweepSpec, args_anom: float, inter_p_anom: float, size_mode: str, seed: int) -> LabeledDataset:
    """Dataset for one grid cell; the normal part depends on the seed only."""
    size_rng = np.random.default_rng(np.random.SeedSequence([seed, 12]))
    anomalous = GroupParams(ERDOS_RENYI, [], args_anom, inter_p_anom)
    if spec.mode == "infusion":
        base = load_dataset(spec.base_dir, require_labels=False)
        sizes = [len(m) for m in base.partitions.values()]
        anomalous.comm_sizes = sample_sizes(sizes, size_mode, spec.n_anomalous, size_rng)
        return infuse(base.network, base.partitions, anomalous, seed=seed, base_params=base.params)
    sizes = normal_sizes(spec, seed)
    anomalous.comm_sizes = sample_sizes(sizes, size_mode, spec.n_anomalous, size_rng)
    normal = GroupParams(BARABASI_ALBERT, sizes, spec.normal_m, spec.inter_p_norm)
    return generate(GeneratorSpec(normal, anomalous, seed))


def run_cell(job: tuple[SweepSpec, float, float, str, int]) -> list[dict]:
    spec, args_anom, inter_p_anom, size_mode, seed = job
    ds = build_cell_dataset(spec, args_anom, inter_p_anom, size_mode, seed)
    config = ExperimentConfig(
        n_train=spec.n_train,
        threshold=spec.threshold,
        learner=spec.learner,
        mask=spec.mask,
        seed=seed,
        polarity=spec.polarity,
        family=spec.mode,
    )
    result = run_experiment(ds, config)
    cid = cell_id(args_anom, inter_p_anom, size_mode)
    return [
        {
            "cell_id": cid,
            "args_anom": args_anom,
            "inter_p_anom": inter_p_anom,
            "size_mode": size_mode,
            "seed": seed,
            "method": method,
            "ap": result.ap[method],
        }
        for method in METHODS
    ]


def run_sweep(spec: SweepSpec, jobs: int = 1, methods: Sequence[str] | None = None) -> list[dict]:
    """One row per (cell, seed, method), in grid order."""
    spec.validate()
    tasks = [(spec, a, p, s, seed) for (a, p, s) in spec.cells() for seed in spec.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_cell, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [run_cell(t) for t in tasks]
    keep = set(resolve_methods(methods, spec.mode))
    return [row for row in itertools.chain.from_iterable(chunks) if row["method"] in keep]


def aggregate(rows: Sequence[dict]) -> list[dict]:
    """Mean, standard error, and raw values of AP per (cell, method)."""
    groups: dict[tuple, list[float]] = defaultdict(list)
    keys: dict[tuple, dict] = {}
    for row in rows:
        key = (row["cell_id"], row["method"])
        groups[key].append(row["ap"])
        keys[key] = {k: row[k] for k in ("cell_id", "args_anom", "inter_p_anom", "size_mode", "method")}
    out = []
    for key, values in groups.items():
        arr = np.asarray(values)
        sem = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
        out.append(dict(keys[key], mean_ap=float(arr.mean()), stderr=sem, n=len(arr), values=values))
    return out


def cell_means(rows: Sequence[dict]) -> dict[tuple[float, float, str, str], float]:
    """(args_anom, inter_p_anom, size_mode, method) -> mean AP."""
    return {
        (a["args_anom"], a["inter_p_anom"], a["size_mode"], a["method"]): a["mean_ap"]
        for a in aggregate(rows)
    }


def trend_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of y on x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    return float((xc * (y - y.mean())).sum() / (xc * xc).sum())


def write_results_csv(rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) if c == "ap" else row[c] for c in RESULT_COLUMNS])


def plot_data(spec: SweepSpec, rows: Sequence[dict]) -> dict:
    """Subplot-grid layout: rows = density, columns = size mode, x = inter_p_anom."""
    means = {(a["args_anom"], a["inter_p_anom"], a["size_mode"], a["method"]): a for a in aggregate(rows)}
    methods = sorted({r["method"] for r in rows}, key=METHODS.index)
    series = {}
    for m in methods:
        grid_mean, grid_err = [], []
        for a in spec.args_anom:
            row_mean, row_err = [], []
            for s in spec.size_modes:
                cells = [means.get((a, p, s, m)) for p in spec.inter_p_anom]
                row_mean.append([c["mean_ap"] if c else None for c in cells])
                row_err.append([c["stderr"] if c else None for c in cells])
            grid_mean.append(row_mean)
            grid_err.append(row_err)
        series[m] = {"mean_ap": grid_mean, "stderr": grid_err}
    return {
        "rows": {"name": "args_anom", "values": spec.args_anom},
        "cols": {"name": "size_mode", "values": spec.size_modes},
        "x": {"name": "inter_p_anom", "values": spec.inter_p_anom},
        "series": series,
    }


def write_plot_json(spec: SweepSpec, rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plot_data(spec, rows), fh, indent=1)
        fh.write("\n")
