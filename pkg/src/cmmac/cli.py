"""Command-line front end: generate, infuse, rank, evaluate, sweep.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import presets
from .evaluation import (
    METHODS,
    ExperimentConfig,
    SweepSpec,
    aggregate,
    attach_ranks,
    rank_cards,
    resolve_methods,
    run_experiment,
    run_sweep,
    score_partitions,
    write_plot_json,
    write_results_csv,
    write_scorecards,
)
from .graph import (
    GraphFormatError,
    LabeledDataset,
    load_dataset,
    load_edge_list,
    load_labels,
    load_partition_map,
    save_dataset,
    split_partition_map,
    validate_partition_map,
)
from .metafeatures import bottom_k
from .netgen import GeneratorSpec, GroupParams, generate, infuse, sample_sizes


class UsageError(Exception):
    pass


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: malformed JSON ({exc})") from None


def _load_graph(edges: str, partitions: str):
    g = load_edge_list(edges)
    parts = load_partition_map(partitions)
    for members in parts.values():
        for v in members:
            g.add_vertex(v)
    return g, parts


def _methods(arg: str | None, family: str) -> list[str]:
    return resolve_methods(arg.split(",") if arg else None, family)


def cmd_generate(args: argparse.Namespace) -> int:
    if args.preset:
        spec = presets.generator_preset(args.preset, args.seed)
    else:
        spec = GeneratorSpec.from_dict(_read_json(args.spec))
        spec.seed = args.seed
    ds = generate(spec)
    out = save_dataset(ds, args.out_dir)
    print(f"wrote {out}: {ds.network.num_vertices} vertices, {ds.network.num_edges} edges, "
          f"{len(ds.partitions)} communities ({len(ds.anomalous_ids)} anomalous)")
    return 0


def cmd_infuse(args: argparse.Namespace) -> int:
    g, parts = _load_graph(args.edges, args.partitions)
    validate_partition_map(g, parts)
    sizes = [len(m) for m in parts.values()]
    if args.preset:
        group = presets.infusion_preset(args.preset, sizes, args.seed)
    else:
        raw = _read_json(args.spec)
        if "size_mode" in raw:
            rng = np.random.default_rng(args.seed)
            raw = dict(raw, comm_sizes=sample_sizes(sizes, raw.pop("size_mode"), int(raw.pop("k", 10)), rng))
        group = GroupParams.from_dict(raw)
    ds = infuse(g, parts, group, seed=args.seed, base_params={"edges": args.edges, "partitions": args.partitions})
    out = save_dataset(ds, args.out_dir)
    print(f"wrote {out}: {len(ds.anomalous_ids)} anomalous communities infused, "
          f"{ds.params['interconnect_added']} inter-community edges")
    return 0


def _config(args: argparse.Namespace, family: str) -> ExperimentConfig:
    return ExperimentConfig(
        n_train=args.n_train,
        threshold=args.threshold,
        learner=args.learner,
        mask=not args.no_mask,
        seed=args.seed,
        polarity=args.polarity,
        family=family,
    )


def cmd_rank(args: argparse.Namespace) -> int:
    g, parts = _load_graph(args.edges, args.partitions)
    validate_partition_map(g, parts)
    if args.train_partitions:
        train_map = load_partition_map(args.train_partitions)
        validate_partition_map(g, train_map)
        test_map = parts
    elif args.n_train > 0:
        train_map, test_map = split_partition_map(parts, args.n_train, (), args.seed)
    else:
        # no held-out split: train and score on the full map
        train_map, test_map = parts, parts
    config = _config(args, args.family)
    cards, _ = score_partitions(g, train_map, test_map, config)
    orders = rank_cards(cards, config.polarity)
    attach_ranks(cards, orders)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_scorecards(cards, out / "scorecard.csv")
    k = min(args.k, len(cards))
    for method in _methods(args.methods, args.family):
        print(f"{method}: {' '.join(bottom_k(orders[method], k))}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.dataset:
        ds = load_dataset(args.dataset, require_labels=True)
    else:
        if not (args.edges and args.partitions):
            raise UsageError("evaluate needs --dataset or --edges/--partitions/--labels")
        if not args.labels:
            raise FileNotFoundError("evaluate needs ground-truth labels (--labels)")
        g, parts = _load_graph(args.edges, args.partitions)
        ds = LabeledDataset(g, parts, load_labels(args.labels))
    family = args.family or ds.params.get("mode", "simulated")
    result = run_experiment(ds, _config(args, family))
    methods = _methods(args.methods, family)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_scorecards(result.scorecards, out / "scorecard.csv")
    with open(out / "results.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "ap"])
        for m in methods:
            writer.writerow([m, repr(round(result.ap[m], 12))])
    width = max(len(m) for m in methods)
    for m in methods:
        print(f"{m:<{width}}  AP={result.ap[m]:.4f}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.preset:
        spec = presets.sweep_preset(args.preset)
    else:
        spec = SweepSpec.from_dict(_read_json(args.spec))
    if args.base_dir:
        spec.base_dir = args.base_dir
    if args.seeds is not None:
        spec.seeds = list(range(args.seeds))
    rows = run_sweep(spec, jobs=args.jobs, methods=args.methods.split(",") if args.methods else None)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(rows, out / "results.csv")
    write_plot_json(spec, rows, out / "plot.json")
    with open(out / "sweep.json", "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=1)
        fh.write("\n")
    agg = aggregate(rows)
    with open(out / "aggregates.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cell_id", "args_anom", "inter_p_anom", "size_mode", "method", "mean_ap", "stderr", "n"])
        for a in agg:
            writer.writerow([a["cell_id"], a["args_anom"], a["inter_p_anom"], a["size_mode"], a["method"],
                             repr(round(a["mean_ap"], 12)), repr(round(a["stderr"], 12)), a["n"]])
    for a in agg:
        print(f"{a['cell_id']:<24} {a['method']:<28} {a['mean_ap']:.3f} ± {a['stderr']:.3f}")
    return 0


def _add_pipeline_flags(p: argparse.ArgumentParser, n_train: int) -> None:
    p.add_argument("--n-train", type=int, default=n_train, help="train communities (normal only)")
    p.add_argument("--threshold", type=float, default=0.5, help="edge-label probability threshold")
    p.add_argument("--learner", choices=("gbdt", "logreg"), default="gbdt")
    p.add_argument("--no-mask", action="store_true", help="keep the scored edge in the graph when extracting features")
    p.add_argument("--polarity", choices=("dense", "sparse"), default="dense",
                   help="which end of each baseline score is anomalous")
    p.add_argument("--methods", help=f"comma list; cmmac or any of {','.join(METHODS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmmac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a fully-simulated labeled dataset")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="GeneratorSpec JSON file")
    src.add_argument("--preset", choices=presets.GENERATOR_PRESETS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("infuse", help="attach anomalous communities to an existing network")
    p.add_argument("--edges", required=True)
    p.add_argument("--partitions", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="anomalous group JSON (alg, comm_sizes or size_mode+k, args, inter_p)")
    src.add_argument("--preset", choices=presets.INFUSION_PRESETS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_infuse)

    p = sub.add_parser("rank", help="rank communities of an unlabeled network")
    p.add_argument("--edges", required=True)
    p.add_argument("--partitions", required=True, help="communities to score")
    p.add_argument("--train-partitions", help="separate train partition map")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=3, help="bottom-ranked communities printed per method")
    p.add_argument("--family", choices=("simulated", "infusion"), default="infusion",
                   help="selects the meta-feature behind 'cmmac'")
    p.add_argument("--out-dir", default=".")
    _add_pipeline_flags(p, n_train=0)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="average precision of every method on a labeled dataset")
    p.add_argument("--dataset", help="dataset directory")
    p.add_argument("--edges")
    p.add_argument("--partitions")
    p.add_argument("--labels")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family", choices=("simulated", "infusion"))
    p.add_argument("--out-dir", default=".")
    _add_pipeline_flags(p, n_train=6)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="parameter-grid sweep")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="SweepSpec JSON file")
    src.add_argument("--preset", choices=presets.SWEEP_PRESETS)
    p.add_argument("--base-dir", help="base dataset directory for infusion sweeps")
    p.add_argument("--seeds", type=int, help="override: use seeds 0..N-1")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--methods", help="comma list; cmmac or any method name")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cmmac: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, GraphFormatError) as exc:
        print(f"cmmac: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
