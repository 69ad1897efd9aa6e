"""Test fixtures for itct."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import yaml

from itct.config import ModelConfig
from itct.data.encoded import EncodedDataset
from itct.data.schema import Schema, parse_schema
from itct.data.synth import make_surrogate_files
from itct.utils import console

TINY_SCHEMA = """\
host,ignored
proto,categorical
flag,categorical
size,continuous
rate,continuous
label,label
"""


@pytest.fixture(autouse=True)
def reset_console() -> None:
    console.set_verbose(False)
    console.set_quiet(False)


@pytest.fixture
def tiny_schema() -> Schema:
    return parse_schema(TINY_SCHEMA)


@pytest.fixture
def small_config() -> ModelConfig:
    return ModelConfig(
        vocab_sizes=(3, 4),
        n_continuous=2,
        embedding_dims=4,
        transformer_blocks=1,
        attention_heads=2,
        mlp_hidden_units_factors=(2.0, 1.0),
        dropout_rate=0.0,
        dtype="float64",
    )


def random_dataset(
    n: int, vocab_sizes: tuple[int, ...], n_continuous: int, seed: int = 0
) -> EncodedDataset:
    rng = np.random.default_rng(seed)
    cat = np.stack([rng.integers(0, v, n) for v in vocab_sizes], axis=1).astype(np.int64)
    cont = rng.normal(size=(n, n_continuous))
    labels = rng.integers(0, 2, n).astype(np.int8)
    return EncodedDataset(
        cat,
        cont,
        labels,
        tuple(f"c{i}" for i in range(len(vocab_sizes))),
        tuple(f"x{i}" for i in range(n_continuous)),
    )


@pytest.fixture
def tiny_dataset(small_config: ModelConfig) -> EncodedDataset:
    return random_dataset(32, small_config.vocab_sizes, small_config.n_continuous)


@pytest.fixture
def surrogate_files(tmp_path: Path) -> list[Path]:
    return make_surrogate_files(tmp_path / "data", rows_per_file=200, seed=7)


@pytest.fixture
def run_config(tmp_path: Path, surrogate_files: list[Path]) -> Path:
    """YAML config for a small, fast end-to-end run on surrogate captures."""
    path = tmp_path / "run.yaml"
    data = {
        "dataset_files": [str(p) for p in surrogate_files],
        "output_dir": str(tmp_path / "run"),
        "embedding_dims": 4,
        "transformer_blocks": 1,
        "attention_heads": 2,
        "mlp_hidden_units_factors": [1.0],
        "epochs": 2,
        "batch_size": 64,
        "n_trees": 5,
        "max_depth": 6,
        "seed": 3,
    }
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


@pytest.fixture
def make_dataset():
    return random_dataset
