"""Random forest over an encoded dataset, used only for its impurity importances."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from itct.config import ForestConfig
from itct.data.encoded import EncodedDataset
from itct.errors import DataError
from itct.featsel.tree import DecisionTree
from itct.utils.console import print_verbose


@dataclass(frozen=True)
class Forest:
    trees: tuple[DecisionTree, ...]
    feature_names: tuple[str, ...]
    categorical: np.ndarray  # bool mask, one entry per feature

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return np.mean([t.predict_proba(X) for t in self.trees], axis=0)


def feature_matrix(
    dataset: EncodedDataset, feature_order: list[str] | None = None
) -> tuple[np.ndarray, tuple[str, ...], np.ndarray]:
    """Stack token ids and continuous values into one float64 matrix.

    Columns follow ``feature_order`` when given (e.g. schema order), else
    categorical features first.
    """
    names = dataset.feature_names
    order = feature_order or names
    missing = [n for n in order if n not in names]
    if missing:
        raise DataError(f"Features not in dataset: {', '.join(missing)}")
    full = np.hstack([dataset.cat.astype(np.float64), dataset.cont.astype(np.float64)])
    cols = [names.index(n) for n in order]
    categorical = np.array([n in dataset.cat_names for n in order], dtype=bool)
    return full[:, cols], tuple(order), categorical


def fit_forest(
    train: EncodedDataset, config: ForestConfig, feature_order: list[str] | None = None
) -> Forest:
    """Fit ``config.n_trees`` Gini trees on bootstrap samples."""
    if len(train) == 0:
        raise DataError("Cannot fit a forest on an empty training set")
    normal, attack = train.class_counts()
    if normal == 0 or attack == 0:
        raise DataError("Training set has a single class; feature importances are undefined")

    X, names, categorical = feature_matrix(train, feature_order)
    y = train.labels.astype(np.int64)
    n_rows = y.size
    k = config.n_candidate_features(len(names))
    seeds = np.random.SeedSequence(config.seed).spawn(config.n_trees)

    def grow(i: int) -> DecisionTree:
        rng = np.random.default_rng(seeds[i])
        rows = rng.integers(0, n_rows, size=n_rows) if config.bootstrap else np.arange(n_rows)
        tree = DecisionTree(
            max_depth=config.max_depth,
            min_samples_split=config.min_samples_split,
            n_candidate_features=k,
            rng=rng,
        )
        tree.fit(X[rows], y[rows], categorical)
        print_verbose(f"tree {i + 1}/{config.n_trees}: {len(tree.nodes())} nodes")
        return tree

    if config.n_jobs > 1:
        with ThreadPoolExecutor(max_workers=config.n_jobs) as pool:
            trees = list(pool.map(grow, range(config.n_trees)))
    else:
        trees = [grow(i) for i in range(config.n_trees)]
    return Forest(tuple(trees), names, categorical)


def importance_vector(forest: Forest) -> np.ndarray:
    """Mean of per-tree normalized impurity decreases, renormalized to sum to 1."""
    per_tree = np.array([t.impurity_importances() for t in forest.trees])
    mean = per_tree.mean(axis=0) if per_tree.size else np.zeros(forest.n_features)
    total = mean.sum()
    return mean / total if total > 0 else mean
