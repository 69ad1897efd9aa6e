"""Tests for categorical vocabularies."""

from __future__ import annotations

import pandas as pd
import pytest

from itct.data.table import DatasetTable
from itct.data.vocab import UNK_TOKEN, Vocabulary, build_vocabulary
from itct.errors import DataError


def _train(schema, protos: list[str]) -> DatasetTable:
    n = len(protos)
    frame = pd.DataFrame(
        {
            "proto": pd.Series(protos, dtype=object),
            "flag": pd.Series(["0"] * n, dtype=object),
            "size": pd.Series([1.0] * n),
            "rate": pd.Series([1.0] * n),
            "label": pd.Series([0] * n, dtype="int8"),
        }
    )
    return DatasetTable(schema, frame)


def test_first_appearance_order(tiny_schema) -> None:
    vocab = build_vocabulary(_train(tiny_schema, ["TCP", "MQTT", "TCP"]))
    assert vocab.columns["proto"] == {UNK_TOKEN: 0, "TCP": 1, "MQTT": 2}
    assert vocab.size("proto") == 3


def test_unseen_and_missing_encode_to_unk(tiny_schema) -> None:
    vocab = build_vocabulary(_train(tiny_schema, ["TCP", "MQTT"]))
    ids = vocab.encode_column("proto", pd.Series(["MQTT", "UDP", None], dtype=object))
    assert ids.tolist() == [2, 0, 0]


def test_unk_token_in_training_data_keeps_id_zero(tiny_schema) -> None:
    vocab = build_vocabulary(_train(tiny_schema, [UNK_TOKEN, "TCP"]))
    assert vocab.columns["proto"] == {UNK_TOKEN: 0, "TCP": 1}


def test_unknown_column(tiny_schema) -> None:
    vocab = build_vocabulary(_train(tiny_schema, ["TCP"]))
    with pytest.raises(DataError, match="No vocabulary"):
        vocab.size("nope")


def test_invalid_ids_rejected() -> None:
    with pytest.raises(DataError, match="contiguous"):
        Vocabulary({"a": {UNK_TOKEN: 0, "x": 2}})


def test_dict_round_trip(tiny_schema) -> None:
    vocab = build_vocabulary(_train(tiny_schema, ["TCP", "MQTT"]))
    assert Vocabulary.from_dict(vocab.to_dict()) == vocab
    assert vocab.subset(["flag"]).names == ["flag"]
