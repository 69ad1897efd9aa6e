"""Tests for encoding, splitting, batching and subsampling."""

from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from itct.data.encoded import (
    EncodedDataset,
    SplitSpec,
    batches,
    encode,
    split,
    split_indices,
    stratified_indices,
    stratified_subsample,
)
from itct.data.preprocess import fit_normalization
from itct.data.table import DatasetTable
from itct.data.vocab import build_vocabulary
from itct.errors import DataError, UsageError


def _table(schema) -> DatasetTable:
    frame = pd.DataFrame(
        {
            "proto": pd.Series(["TCP", "MQTT", "TCP", "UDP"], dtype=object),
            "flag": pd.Series(["0", "1", "1", "0"], dtype=object),
            "size": pd.Series([1.0, 2.0, 3.0, 4.0]),
            "rate": pd.Series([5.0, 5.0, 5.0, 5.0]),
            "label": pd.Series([0, 1, 0, 1], dtype="int8"),
        }
    )
    return DatasetTable(schema, frame)


def test_encode(tiny_schema) -> None:
    table = _table(tiny_schema)
    ds = encode(table, build_vocabulary(table), fit_normalization(table))
    assert ds.cat_names == ("proto", "flag")
    assert ds.cont_names == ("size", "rate")
    assert ds.cat[:, 0].tolist() == [1, 2, 1, 3]
    np.testing.assert_allclose(ds.cont[:, 1], 0.0)
    assert ds.labels.tolist() == [0, 1, 0, 1]


def test_encode_selected(tiny_schema) -> None:
    table = _table(tiny_schema)
    vocab, stats = build_vocabulary(table), fit_normalization(table)
    ds = encode(table, vocab, stats, selected=["size", "proto"])
    assert ds.feature_names == ["proto", "size"]


def test_encode_rejects_unimputed(tiny_schema) -> None:
    table = _table(tiny_schema)
    vocab, stats = build_vocabulary(table), fit_normalization(table)
    frame = table.frame.copy()
    frame.loc[0, "size"] = np.nan
    with pytest.raises(DataError, match="impute"):
        encode(table.with_frame(frame), vocab, stats)


def test_split_sizes() -> None:
    train, val, test = split_indices(1001, SplitSpec(seed=1))
    assert (train.size, val.size, test.size) == (800, 100, 101)
    combined = np.concatenate([train, val, test])
    assert sorted(combined.tolist()) == list(range(1001))


def test_split_is_seeded() -> None:
    a = split_indices(50, SplitSpec(seed=5))
    b = split_indices(50, SplitSpec(seed=5))
    c = split_indices(50, SplitSpec(seed=6))
    assert all(np.array_equal(x, y) for x, y in zip(a, b, strict=True))
    assert not np.array_equal(a[0], c[0])


def test_split_too_small() -> None:
    with pytest.raises(DataError, match="too small"):
        split_indices(3, SplitSpec())


def test_split_empty() -> None:
    with pytest.raises(DataError, match="empty"):
        split_indices(0, SplitSpec())


def test_split_spec_must_sum_to_one() -> None:
    with pytest.raises(UsageError):
        SplitSpec(train=0.5, val=0.1, test=0.1)


def test_split_datasets(make_dataset) -> None:
    ds = make_dataset(100, (3,), 1)
    train, val, test = split(ds, SplitSpec(seed=0))
    assert (len(train), len(val), len(test)) == (80, 10, 10)


def test_batches_cover_all_rows(make_dataset) -> None:
    ds = make_dataset(10, (3,), 1)
    sizes = [len(b.labels) for b in batches(ds, 4)]
    assert sizes == [4, 4, 2]
    rows = np.concatenate([b.cont[:, 0] for b in batches(ds, 3, shuffle=True, seed=2)])
    assert sorted(rows.tolist()) == sorted(ds.cont[:, 0].tolist())


def test_batches_invalid_size(make_dataset) -> None:
    with pytest.raises(UsageError):
        list(batches(make_dataset(4, (2,), 1), 0))


def test_select_keeps_kind_order(make_dataset) -> None:
    ds = make_dataset(5, (2, 3), 2)
    sub = ds.select(["x1", "c1"])
    assert sub.cat_names == ("c1",)
    assert sub.cont_names == ("x1",)
    np.testing.assert_array_equal(sub.cat[:, 0], ds.cat[:, 1])


def test_select_unknown(make_dataset) -> None:
    with pytest.raises(DataError, match="not in dataset"):
        make_dataset(5, (2,), 1).select(["nope"])


def test_shape_mismatch_rejected() -> None:
    with pytest.raises(DataError):
        EncodedDataset(
            np.zeros((2, 1), np.int64), np.zeros((3, 0)), np.zeros(2, np.int8), ("a",), ()
        )


def test_stratified_keeps_proportions() -> None:
    labels = np.array([0] * 800 + [1] * 200, dtype=np.int8)
    idx = stratified_indices(labels, seed=0, fraction=0.1)
    assert idx.size == 100
    assert int(labels[idx].sum()) == 20


def test_stratified_cap_and_seed() -> None:
    labels = np.array([0, 1] * 50, dtype=np.int8)
    a = stratified_indices(labels, seed=4, cap=10)
    b = stratified_indices(labels, seed=4, cap=10)
    assert a.size == 10
    np.testing.assert_array_equal(a, b)
    assert np.all(np.diff(a) > 0)


def test_stratified_full_fraction_is_identity(make_dataset) -> None:
    ds = make_dataset(20, (2,), 1)
    assert len(stratified_subsample(ds, seed=0, fraction=1.0)) == 20
