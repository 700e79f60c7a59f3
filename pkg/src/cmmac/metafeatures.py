"""Per-community aggregation of predicted membership probabilities, and ranking."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

META_FEATURES = (
    "edges_normality_mean",
    "edges_normality_stdv",
    "predicted_edge_labels_mean",
    "predicted_edge_labels_stdv",
)
DEFAULT_THRESHOLD = 0.5
# reporting meta-feature per dataset family
REPORTING_META_FEATURE = {
    "simulated": "predicted_edge_labels_stdv",
    "infusion": "edges_normality_stdv",
}


def edge_labels(probs: Sequence[float], threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if probs.size == 0:
        raise ValueError("no edge probabilities")
    return (probs >= threshold).astype(int)


def score_community(probs: Sequence[float], threshold: float = DEFAULT_THRESHOLD) -> dict[str, float]:
    """The four meta-features; STDV variants are one minus the population std."""
    probs = np.asarray(probs, dtype=float)
    labels = edge_labels(probs, threshold)
    return {
        "edges_normality_mean": float(probs.mean()),
        "edges_normality_stdv": float(1.0 - probs.std()),
        "predicted_edge_labels_mean": float(labels.mean()),
        "predicted_edge_labels_stdv": float(1.0 - labels.std()),
    }


def rank_scores(scores: Mapping[str, float], anomalous_high: bool = False) -> list[str]:
    """Community ids, most anomalous first; ties broken by id.

    By default the lowest score is the most anomalous.
    """
    sign = -1.0 if anomalous_high else 1.0
    return sorted(scores, key=lambda cid: (sign * scores[cid], cid))


def rank_communities(cards: Sequence[Mapping], method: str) -> list[str]:
    """Ascending order of one meta-feature over scorecards (dicts with a ``community`` key)."""
    if not cards:
        raise ValueError("no scorecards to rank")
    if method not in META_FEATURES:
        raise ValueError(f"unknown meta-feature {method!r}; expected one of {META_FEATURES}")
    return rank_scores({card["community"]: card[method] for card in cards})


def bottom_k(ranked: Sequence[str], k: int) -> list[str]:
    if not 0 <= k <= len(ranked):
        raise ValueError(f"k={k} outside [0, {len(ranked)}]")
    return list(ranked[:k])
