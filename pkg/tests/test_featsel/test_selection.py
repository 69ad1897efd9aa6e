"""Tests for the forest, importances and threshold selection."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from itct.config import ForestConfig
from itct.data.encoded import EncodedDataset
from itct.errors import DataError
from itct.featsel.forest import Forest, feature_matrix, fit_forest, importance_vector
from itct.featsel.selection import ImportanceReport, apply_selection, importances, select
from itct.featsel.tree import DecisionTree


def _signal_dataset(n: int = 200, seed: int = 0) -> EncodedDataset:
    """Label is a copy of the first categorical column; everything else is noise."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, n).astype(np.int8)
    cat = np.column_stack([labels + 1, rng.integers(1, 4, n), rng.integers(1, 3, n)])
    cont = rng.normal(size=(n, 3))
    return EncodedDataset(
        cat.astype(np.int64), cont, labels, ("signal", "n1", "n2"), ("n3", "n4", "n5")
    )


def test_signal_feature_dominates() -> None:
    forest = fit_forest(_signal_dataset(), ForestConfig(n_trees=10, seed=1))
    report = importances(forest)
    signal = report.importances["signal"]
    assert all(signal > v for k, v in report.importances.items() if k != "signal")
    assert sum(report.importances.values()) == pytest.approx(1.0, abs=1e-9)


def test_forest_is_seeded() -> None:
    ds = _signal_dataset(seed=2)
    a = importance_vector(fit_forest(ds, ForestConfig(n_trees=5, seed=9, max_depth=3)))
    b = importance_vector(fit_forest(ds, ForestConfig(n_trees=5, seed=9, max_depth=3)))
    np.testing.assert_array_equal(a, b)


def test_threads_match_serial() -> None:
    ds = _signal_dataset(seed=4)
    serial = fit_forest(ds, ForestConfig(n_trees=6, seed=2, max_depth=3))
    threaded = fit_forest(ds, ForestConfig(n_trees=6, seed=2, max_depth=3, n_jobs=3))
    np.testing.assert_array_equal(importance_vector(serial), importance_vector(threaded))


def test_single_class_rejected() -> None:
    ds = _signal_dataset()
    one_class = ds.take(np.flatnonzero(ds.labels == 1))
    with pytest.raises(DataError, match="single class"):
        fit_forest(one_class, ForestConfig(n_trees=1))


def test_feature_order() -> None:
    ds = _signal_dataset(n=5)
    X, names, categorical = feature_matrix(ds, ["n3", "signal"])
    assert names == ("n3", "signal")
    assert categorical.tolist() == [False, True]
    np.testing.assert_array_equal(X[:, 1], ds.cat[:, 0])


def test_all_leaf_forest_has_zero_importances() -> None:
    tree = DecisionTree().fit(np.ones((3, 2)), np.zeros(3, int), np.zeros(2, bool))
    forest = Forest((tree,), ("a", "b"), np.zeros(2, bool))
    assert importance_vector(forest).tolist() == [0.0, 0.0]


def test_shuffled_feature_never_gains_importance() -> None:
    ds = _signal_dataset(seed=5)
    config = ForestConfig(n_trees=5, seed=0, max_depth=4)
    before = importances(fit_forest(ds, config)).importances["signal"]
    for seed in range(10):
        cat = ds.cat.copy()
        cat[:, 0] = np.random.default_rng(seed).permutation(cat[:, 0])
        shuffled = EncodedDataset(cat, ds.cont, ds.labels, ds.cat_names, ds.cont_names)
        after = importances(fit_forest(shuffled, config)).importances["signal"]
        assert after <= before


def _report(values: list[float]) -> ImportanceReport:
    return ImportanceReport({f"f{i}": v for i, v in enumerate(values)})


def test_mean_threshold() -> None:
    report = apply_selection(_report([0.7, 0.2, 0.1]))
    assert report.threshold == pytest.approx(1 / 3)
    assert report.selected == ("f0",)


def test_equal_importances_all_selected() -> None:
    assert select(_report([0.2] * 5)) == ["f0", "f1", "f2", "f3", "f4"]


def test_zero_threshold_selects_all() -> None:
    assert len(select(_report([0.5, 0.5, 0.0]), threshold=0)) == 3


def test_order_descending_then_schema() -> None:
    assert select(_report([0.1, 0.4, 0.4, 0.1]), threshold=0.05) == ["f1", "f2", "f0", "f3"]


def test_force_include_appended_once() -> None:
    report = apply_selection(_report([0.7, 0.2, 0.1]), force_include=["f2", "f0", "f2"])
    assert report.selected == ("f0",)
    assert report.forced_included == ("f2",)
    assert report.features == ["f0", "f2"]


def test_force_include_unknown() -> None:
    with pytest.raises(DataError, match="protocol"):
        apply_selection(_report([1.0]), force_include=["protocol"])


def test_report_save_load(tmp_path: Path) -> None:
    report = apply_selection(_report([0.6, 0.4]), force_include=["f1"])
    path = report.save(tmp_path / "importances.json")
    assert ImportanceReport.load(path) == report


def test_report_missing(tmp_path: Path) -> None:
    with pytest.raises(DataError, match="select-features"):
        ImportanceReport.load(tmp_path / "importances.json")


def test_report_malformed(tmp_path: Path) -> None:
    path = tmp_path / "importances.json"
    path.write_text('{"selected": []}')
    with pytest.raises(DataError, match="Malformed"):
        ImportanceReport.load(path)
