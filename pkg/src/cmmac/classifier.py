"""Membership-edge link predictor trained on balanced train-BPG examples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .bipartite import BipartiteView, candidate_edges, sample_negative_edges
from .features import FEATURE_ORDER, EdgeFeatureRow, feature_matrix, feature_rows
from .gbdt import GradientBoostedTrees, sigmoid

MODEL_FORMAT_VERSION = 1
POSITIVE_CAP = 100_000


class SchemaMismatchError(ValueError):
    pass


@dataclass
class TrainingSet:
    rows: list[EdgeFeatureRow]

    def __post_init__(self) -> None:
        labels = [r.label for r in self.rows]
        if any(lab not in (0, 1) for lab in labels):
            raise ValueError("every training row needs a 0/1 label")
        if labels.count(1) != labels.count(0):
            raise ValueError(f"unbalanced training set: {labels.count(1)} positive, {labels.count(0)} negative")
        if len({(r.v, r.c) for r in self.rows}) != len(self.rows):
            raise ValueError("duplicate pairs in training set")

    @property
    def positive_count(self) -> int:
        return sum(r.label == 1 for r in self.rows)

    @property
    def negative_count(self) -> int:
        return sum(r.label == 0 for r in self.rows)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return feature_matrix(self.rows), np.array([r.label for r in self.rows], dtype=float)


def build_training_set(
    train_bpg: BipartiteView,
    rng: np.random.Generator,
    mask: bool = True,
    cap: int = POSITIVE_CAP,
) -> TrainingSet:
    """All membership edges (uniformly capped) plus as many sampled non-edges.

    Negatives pair regular vertices holding at least one train membership with
    communities they do not belong to.
    """
    positives = candidate_edges(train_bpg, train_bpg.communities)
    if not positives:
        raise ValueError("train bipartite graph has no membership edges")
    if len(positives) > cap:
        keep = np.sort(rng.choice(len(positives), size=cap, replace=False))
        positives = [positives[i] for i in keep]
    try:
        negatives = sample_negative_edges(train_bpg, len(positives), rng, min_vertex_degree=1)
    except ValueError as exc:
        raise ValueError(f"degenerate train bipartite graph: {exc}") from None
    rows = feature_rows(train_bpg, positives, label=1, mask=mask) + feature_rows(train_bpg, negatives, label=0, mask=mask)
    return TrainingSet(rows)


class LogisticRegression:
    """L2-regularised logistic regression on standardised features, fit by Newton steps."""

    def __init__(self, l2: float = 1.0, max_iter: int = 50, tol: float = 1e-10):
        self.l2 = l2
        self.max_iter = max_iter
        self.tol = tol
        self.mean = np.zeros(0)
        self.scale = np.ones(0)
        self.coef = np.zeros(0)
        self.intercept = 0.0

    def get_params(self) -> dict:
        return {"l2": self.l2, "max_iter": self.max_iter, "tol": self.tol}

    def fit(self, X: np.ndarray, y: np.ndarray) -> LogisticRegression:
        X = np.asarray(X, dtype=float)
        self.mean = X.mean(axis=0)
        self.scale = X.std(axis=0)
        self.scale[self.scale == 0] = 1.0
        Z = np.hstack([np.ones((len(X), 1)), (X - self.mean) / self.scale])
        w = np.zeros(Z.shape[1])
        penalty = np.full(Z.shape[1], self.l2)
        penalty[0] = 0.0
        for _ in range(self.max_iter):
            p = sigmoid(Z @ w)
            grad = Z.T @ (p - y) + penalty * w
            hess = (Z * (p * (1 - p))[:, None]).T @ Z + np.diag(penalty) + 1e-9 * np.eye(len(w))
            step = np.linalg.solve(hess, grad)
            w -= step
            if np.abs(step).max() < self.tol:
                break
        self.intercept, self.coef = float(w[0]), w[1:]
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return sigmoid(self.intercept + ((X - self.mean) / self.scale) @ self.coef)

    def to_dict(self) -> dict:
        return {
            "params": self.get_params(),
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "coef": self.coef.tolist(),
            "intercept": self.intercept,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> LogisticRegression:
        model = cls(**raw["params"])
        model.mean = np.array(raw["mean"], dtype=float)
        model.scale = np.array(raw["scale"], dtype=float)
        model.coef = np.array(raw["coef"], dtype=float)
        model.intercept = float(raw["intercept"])
        return model


LEARNERS = {"gbdt": GradientBoostedTrees, "logreg": LogisticRegression}


def roc_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney AUC with average ranks for ties."""
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return float("nan")
    ranks = rankdata(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


@dataclass
class LinkPredictor:
    model: GradientBoostedTrees | LogisticRegression
    kind: str
    feature_order: tuple[str, ...] = FEATURE_ORDER
    training_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": self.kind,
            "feature_order": list(self.feature_order),
            "training_meta": self.training_meta,
            "model": self.model.to_dict(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> LinkPredictor:
        if raw.get("format_version") != MODEL_FORMAT_VERSION:
            raise SchemaMismatchError(f"unsupported model format {raw.get('format_version')!r}")
        kind = raw["kind"]
        if kind not in LEARNERS:
            raise SchemaMismatchError(f"unknown learner {kind!r}")
        return cls(LEARNERS[kind].from_dict(raw["model"]), kind, tuple(raw["feature_order"]), raw["training_meta"])


def train(ts: TrainingSet, hyper: dict | None = None, seed: int = 0, kind: str = "gbdt") -> LinkPredictor:
    """Fit a learner on the training set.

    Both learners are deterministic; ``seed`` is recorded for provenance.
    """
    if not ts.rows:
        raise ValueError("empty training set")
    if kind not in LEARNERS:
        raise ValueError(f"unknown learner {kind!r}; expected one of {sorted(LEARNERS)}")
    X, y = ts.arrays()
    if not np.isfinite(X).all():
        raise ValueError("non-finite feature values in training set")
    model = LEARNERS[kind](**(hyper or {})).fit(X, y)
    meta = {
        "seed": seed,
        "hyperparameters": model.get_params(),
        "n_rows": len(y),
        "train_auc": roc_auc(model.predict_proba(X), y),
    }
    return LinkPredictor(model, kind, FEATURE_ORDER, meta)


def predict_proba(
    lp: LinkPredictor,
    rows: Sequence[EdgeFeatureRow],
    feature_order: Sequence[str] = FEATURE_ORDER,
) -> np.ndarray:
    """Existence probability of each row's membership edge."""
    if tuple(feature_order) != tuple(lp.feature_order):
        raise SchemaMismatchError(f"model expects features {lp.feature_order}, got {tuple(feature_order)}")
    if not rows:
        return np.empty(0)
    return lp.model.predict_proba(feature_matrix(rows))


def save_model(lp: LinkPredictor, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(lp.to_dict(), fh)


def load_model(path: str | Path) -> LinkPredictor:
    with open(path, encoding="utf-8") as fh:
        return LinkPredictor.from_dict(json.load(fh))
