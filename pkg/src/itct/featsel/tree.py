"""Gini decision trees over mixed categorical/continuous features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from itct.errors import DataError


@dataclass
class Leaf:
    counts: tuple[int, int]  # (normal, attack)

    @property
    def n_samples(self) -> int:
        return self.counts[0] + self.counts[1]


@dataclass
class Split:
    """Internal node. Categorical: left iff x == threshold; continuous: left iff x <= threshold."""

    feature: int
    threshold: float
    categorical: bool
    impurity_decrease: float  # n*gini(node) - n_l*gini(left) - n_r*gini(right)
    n_samples: int
    left: TreeNode | None = None
    right: TreeNode | None = None


TreeNode = Leaf | Split


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    gain: float


def weighted_gini(n: np.ndarray | float, pos: np.ndarray | float) -> np.ndarray | float:
    """n * gini for a node with ``pos`` attack rows out of ``n`` (n > 0)."""
    neg = n - pos
    return n - (pos * pos + neg * neg) / n


def best_split_for_feature(
    x: np.ndarray, y: np.ndarray, categorical: bool
) -> tuple[float, float] | None:
    """Best (threshold, gain) for one feature; lowest threshold wins ties."""
    n = y.size
    parent = weighted_gini(float(n), float(y.sum()))
    if categorical:
        values, inverse = np.unique(x, return_inverse=True)
        if values.size < 2:
            return None
        n_left = np.bincount(inverse, minlength=values.size).astype(np.float64)
        pos_left = np.bincount(inverse, weights=y, minlength=values.size)
        thresholds = values
    else:
        order = np.argsort(x, kind="stable")
        xs = x[order]
        boundaries = np.flatnonzero(xs[1:] > xs[:-1]) + 1  # left = xs[:b]
        if boundaries.size == 0:
            return None
        cum_pos = np.cumsum(y[order], dtype=np.float64)
        n_left = boundaries.astype(np.float64)
        pos_left = cum_pos[boundaries - 1]
        thresholds = (xs[boundaries - 1] + xs[boundaries]) / 2.0
    n_right = n - n_left
    pos_right = float(y.sum()) - pos_left
    gains = parent - weighted_gini(n_left, pos_left) - weighted_gini(n_right, pos_right)
    best = int(np.argmax(gains))
    return float(thresholds[best]), float(gains[best])


def find_best_split(
    X: np.ndarray, y: np.ndarray, features: np.ndarray, categorical: np.ndarray
) -> SplitCandidate | None:
    """Scan ``features`` in ascending order; a later feature must be strictly better."""
    best: SplitCandidate | None = None
    for f in np.sort(features):
        found = best_split_for_feature(X[:, f], y, bool(categorical[f]))
        if found is None:
            continue
        threshold, gain = found
        if best is None or gain > best.gain:
            best = SplitCandidate(int(f), threshold, gain)
    return best


def go_left(values: np.ndarray, threshold: float, categorical: bool) -> np.ndarray:
    return values == threshold if categorical else values <= threshold


class DecisionTree:
    """CART classifier with Gini impurity, grown depth-first without recursion."""

    def __init__(
        self,
        *,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        n_candidate_features: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.n_candidate_features = n_candidate_features
        self.rng = rng or np.random.default_rng(0)
        self.root: TreeNode | None = None
        self.n_features = 0

    def fit(self, X: np.ndarray, y: np.ndarray, categorical: np.ndarray) -> DecisionTree:
        if y.size == 0:
            raise DataError("Cannot fit a tree on zero rows")
        self.n_features = X.shape[1]
        y = y.astype(np.float64)
        all_idx = np.arange(y.size)
        self.root = self._make_node(X, y, categorical, all_idx, 0)
        stack: list[tuple[Split, np.ndarray, int]] = []
        if isinstance(self.root, Split):
            stack.append((self.root, all_idx, 0))
        while stack:
            node, idx, depth = stack.pop()
            mask = go_left(X[idx, node.feature], node.threshold, node.categorical)
            for side, child_idx in (("left", idx[mask]), ("right", idx[~mask])):
                child = self._make_node(X, y, categorical, child_idx, depth + 1)
                setattr(node, side, child)
                if isinstance(child, Split):
                    stack.append((child, child_idx, depth + 1))
        return self

    def _make_node(
        self, X: np.ndarray, y: np.ndarray, categorical: np.ndarray, idx: np.ndarray, depth: int
    ) -> TreeNode:
        labels = y[idx]
        pos = int(labels.sum())
        leaf = Leaf((idx.size - pos, pos))
        if (
            pos in (0, idx.size)
            or idx.size < self.min_samples_split
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return leaf
        k = min(self.n_candidate_features or self.n_features, self.n_features)
        if k < self.n_features:
            features = self.rng.choice(self.n_features, size=k, replace=False)
        else:
            features = np.arange(self.n_features)
        cand = find_best_split(X[idx], labels, features, categorical)
        if cand is None or cand.gain <= 0.0:
            return leaf
        return Split(
            feature=cand.feature,
            threshold=cand.threshold,
            categorical=bool(categorical[cand.feature]),
            impurity_decrease=cand.gain,
            n_samples=int(idx.size),
        )

    def nodes(self) -> list[TreeNode]:
        out: list[TreeNode] = []
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            out.append(node)
            if isinstance(node, Split):
                stack.extend(n for n in (node.right, node.left) if n is not None)
        return out

    def impurity_importances(self) -> np.ndarray:
        """Total impurity decrease per feature, normalized to sum to 1 (zeros if no split)."""
        totals = np.zeros(self.n_features, dtype=np.float64)
        for node in self.nodes():
            if isinstance(node, Split):
                totals[node.feature] += node.impurity_decrease
        s = totals.sum()
        return totals / s if s > 0 else totals

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.float64)
        for i, row in enumerate(X):
            node = self.root
            while isinstance(node, Split):
                left = go_left(row[node.feature], node.threshold, node.categorical)
                node = node.left if left else node.right
            out[i] = node.counts[1] / max(node.n_samples, 1)
        return out
