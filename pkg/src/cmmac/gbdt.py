"""Gradient-boosted regression trees for binary classification under logistic loss.

Second-order (Newton) boosting: each tree is grown greedily on the gradient
g = p - y and hessian h = p(1 - p), with split gain

    G_L^2 / (H_L + lam) + G_R^2 / (H_R + lam) - G^2 / (H + lam)

and leaf weight -G / (H + lam).
"""

from __future__ import annotations

import numpy as np


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


class RegressionTree:
    """Depth-limited tree stored as flat arrays; leaves have feature == -1."""

    def __init__(self, max_depth: int = 3, reg_lambda: float = 1.0, min_child_weight: float = 1.0, gamma: float = 0.0):
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.min_child_weight = min_child_weight
        self.gamma = gamma
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _best_split(self, X: np.ndarray, g: np.ndarray, h: np.ndarray) -> tuple[float, int, float]:
        lam = self.reg_lambda
        G, H = g.sum(), h.sum()
        parent = G * G / (H + lam)
        best = (0.0, -1, 0.0)
        for j in range(X.shape[1]):
            order = np.argsort(X[:, j], kind="stable")
            xs = X[order, j]
            gl = np.cumsum(g[order])[:-1]
            hl = np.cumsum(h[order])[:-1]
            # only cut between distinct values
            valid = (xs[1:] > xs[:-1]) & (hl >= self.min_child_weight) & (H - hl >= self.min_child_weight)
            if not valid.any():
                continue
            gr, hr = G - gl, H - hl
            gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
            gain = np.where(valid, gain, -np.inf)
            i = int(np.argmax(gain))
            if gain[i] > best[0] + 1e-12:
                best = (float(gain[i]), j, 0.5 * (xs[i] + xs[i + 1]))
        return best

    def fit(self, X: np.ndarray, g: np.ndarray, h: np.ndarray) -> RegressionTree:
        stack = [(self._new_node(), np.arange(len(g)), 0)]
        while stack:
            node, idx, depth = stack.pop()
            gs, hs = g[idx], h[idx]
            self.value[node] = float(-gs.sum() / (hs.sum() + self.reg_lambda))
            if depth >= self.max_depth or len(idx) < 2:
                continue
            gain, j, thr = self._best_split(X[idx], gs, hs)
            if j < 0 or gain <= self.gamma:
                continue
            mask = X[idx, j] <= thr
            self.feature[node] = j
            self.threshold[node] = thr
            self.left[node] = self._new_node()
            self.right[node] = self._new_node()
            stack.append((self.right[node], idx[~mask], depth + 1))
            stack.append((self.left[node], idx[mask], depth + 1))
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left, right = np.asarray(self.left), np.asarray(self.right)
        node = np.zeros(len(X), dtype=int)
        rows = np.arange(len(X))
        for _ in range(self.max_depth + 1):
            f = feature[node]
            inner = f >= 0
            if not inner.any():
                break
            go_left = X[rows, np.where(inner, f, 0)] <= threshold[node]
            node = np.where(inner, np.where(go_left, left[node], right[node]), node)
        return np.asarray(self.value)[node]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "value": self.value,
        }

    @classmethod
    def from_dict(cls, raw: dict, max_depth: int) -> RegressionTree:
        tree = cls(max_depth=max_depth)
        for key in ("feature", "left", "right"):
            setattr(tree, key, [int(x) for x in raw[key]])
        for key in ("threshold", "value"):
            setattr(tree, key, [float(x) for x in raw[key]])
        return tree


class GradientBoostedTrees:
    def __init__(
        self,
        n_estimators: int = 200,
        max_depth: int = 3,
        learning_rate: float = 0.1,
        reg_lambda: float = 1.0,
        min_child_weight: float = 1.0,
        gamma: float = 0.0,
    ):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.reg_lambda = reg_lambda
        self.min_child_weight = min_child_weight
        self.gamma = gamma
        self.base_score = 0.0
        self.trees: list[RegressionTree] = []

    def get_params(self) -> dict:
        return {
            "n_estimators": self.n_estimators,
            "max_depth": self.max_depth,
            "learning_rate": self.learning_rate,
            "reg_lambda": self.reg_lambda,
            "min_child_weight": self.min_child_weight,
            "gamma": self.gamma,
        }

    def fit(self, X: np.ndarray, y: np.ndarray) -> GradientBoostedTrees:
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        rate = np.clip(y.mean(), 1e-6, 1 - 1e-6)
        self.base_score = float(np.log(rate / (1 - rate)))
        margin = np.full(len(y), self.base_score)
        self.trees = []
        for _ in range(self.n_estimators):
            p = sigmoid(margin)
            g, h = p - y, p * (1 - p)
            tree = RegressionTree(self.max_depth, self.reg_lambda, self.min_child_weight, self.gamma).fit(X, g, h)
            self.trees.append(tree)
            margin += self.learning_rate * tree.predict(X)
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        margin = np.full(len(X), self.base_score)
        for tree in self.trees:
            margin += self.learning_rate * tree.predict(X)
        return margin

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Probability of the positive class, one value per row."""
        return sigmoid(self.decision_function(X))

    def to_dict(self) -> dict:
        return {"params": self.get_params(), "base_score": self.base_score, "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, raw: dict) -> GradientBoostedTrees:
        model = cls(**raw["params"])
        model.base_score = float(raw["base_score"])
        model.trees = [RegressionTree.from_dict(t, model.max_depth) for t in raw["trees"]]
        return model
