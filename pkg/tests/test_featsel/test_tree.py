"""Tests for Gini decision trees, checked against exhaustive split search."""

from __future__ import annotations

import numpy as np
import pytest

from itct.errors import DataError
from itct.featsel.tree import (
    DecisionTree,
    Leaf,
    Split,
    best_split_for_feature,
    weighted_gini,
)


def _gini_gain(x: np.ndarray, y: np.ndarray, left: np.ndarray) -> float:
    n, pos = float(y.size), float(y.sum())
    nl, pl = float(left.sum()), float(y[left].sum())
    nr, pr = n - nl, pos - pl
    return weighted_gini(n, pos) - weighted_gini(nl, pl) - weighted_gini(nr, pr)


def brute_force_split(X: np.ndarray, y: np.ndarray, categorical: np.ndarray):
    """Every feature, every candidate threshold; strict improvement keeps the earliest."""
    best = None
    for f in range(X.shape[1]):
        values = np.unique(X[:, f])
        if categorical[f]:
            candidates = list(values)
        else:
            candidates = [(a + b) / 2.0 for a, b in zip(values[:-1], values[1:], strict=True)]
        for t in candidates:
            left = X[:, f] == t if categorical[f] else X[:, f] <= t
            if left.all() or not left.any():
                continue
            gain = _gini_gain(X[:, f], y, left)
            if best is None or gain > best[2]:
                best = (f, float(t), gain)
    return best


def test_weighted_gini() -> None:
    assert weighted_gini(4.0, 2.0) == pytest.approx(2.0)
    assert weighted_gini(4.0, 0.0) == 0.0


@pytest.mark.parametrize("seed", range(15))
def test_root_matches_exhaustive_search(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 13))
    X = np.column_stack(
        [rng.integers(0, 3, n), rng.integers(0, 5, n), rng.normal(size=n).round(1)]
    ).astype(np.float64)
    categorical = np.array([True, False, False])
    y = rng.integers(0, 2, n)
    if y.min() == y.max():
        y[0] = 1 - y[0]

    expected = brute_force_split(X, y.astype(np.float64), categorical)
    tree = DecisionTree(max_depth=1).fit(X, y, categorical)
    if expected is None or expected[2] <= 0:
        assert isinstance(tree.root, Leaf)
        return
    assert isinstance(tree.root, Split)
    assert tree.root.feature == expected[0]
    assert tree.root.threshold == pytest.approx(expected[1])
    assert tree.root.impurity_decrease == pytest.approx(expected[2])


def test_feature_equal_to_label_is_root() -> None:
    rng = np.random.default_rng(0)
    y = rng.integers(0, 2, 20)
    X = np.column_stack([y, rng.integers(0, 4, 20), rng.normal(size=20)]).astype(np.float64)
    tree = DecisionTree().fit(X, y, np.array([True, True, False]))
    assert isinstance(tree.root, Split)
    assert tree.root.feature == 0
    assert isinstance(tree.root.left, Leaf) and isinstance(tree.root.right, Leaf)


def test_identical_features_tie_to_lower_index() -> None:
    y = np.array([0, 0, 0, 0, 0, 1, 1, 1, 1, 1])
    X = np.column_stack([y, y]).astype(np.float64)
    tree = DecisionTree().fit(X, y, np.array([False, False]))
    assert tree.root.feature == 0
    assert tree.root.threshold == 0.5


def test_lowest_threshold_wins_ties() -> None:
    x = np.array([0.0, 1.0, 2.0, 3.0])
    y = np.array([0.0, 1.0, 1.0, 0.0])
    threshold, gain = best_split_for_feature(x, y, categorical=False)
    # thresholds 0.5 and 2.5 give the same decrease
    assert threshold == 0.5
    assert gain == pytest.approx(weighted_gini(4.0, 2.0) - weighted_gini(3.0, 2.0))


def test_children_counts_sum_to_parent() -> None:
    rng = np.random.default_rng(3)
    X = rng.normal(size=(60, 3))
    y = (X[:, 0] + 0.3 * rng.normal(size=60) > 0).astype(int)
    tree = DecisionTree(max_depth=4).fit(X, y, np.zeros(3, bool))
    for node in tree.nodes():
        if isinstance(node, Split):
            assert node.impurity_decrease >= 0
            assert node.left.n_samples + node.right.n_samples == node.n_samples


def test_pure_node_is_leaf() -> None:
    tree = DecisionTree().fit(np.ones((5, 1)), np.zeros(5, int), np.array([False]))
    assert tree.root == Leaf((5, 0))
    assert tree.impurity_importances().tolist() == [0.0]


def test_single_split_importance() -> None:
    y = np.array([0, 0, 1, 1])
    X = np.column_stack([np.zeros(4), np.zeros(4), y]).astype(np.float64)
    tree = DecisionTree().fit(X, y, np.zeros(3, bool))
    assert tree.impurity_importances().tolist() == [0.0, 0.0, 1.0]


def test_predict_proba() -> None:
    y = np.array([0, 0, 1, 1])
    X = y.reshape(-1, 1).astype(np.float64)
    tree = DecisionTree().fit(X, y, np.array([True]))
    np.testing.assert_array_equal(tree.predict_proba(X), [0.0, 0.0, 1.0, 1.0])


def test_empty_rows() -> None:
    with pytest.raises(DataError):
        DecisionTree().fit(np.zeros((0, 1)), np.zeros(0), np.array([False]))
