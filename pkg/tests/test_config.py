"""Tests for config module."""

from pathlib import Path

import pytest

from itct.config import DType, ForestConfig, ModelConfig, PipelineConfig, TrainConfig
from itct.errors import UsageError


def test_reference_defaults():
    config = TrainConfig()
    assert config.learning_rate == 0.001
    assert config.weight_decay == 0.0001
    assert config.batch_size == 265
    assert config.epochs == 20
    assert config.dropout_rate is None
    model = ModelConfig(vocab_sizes=(3,))
    assert (model.embedding_dims, model.transformer_blocks, model.attention_heads) == (16, 4, 4)
    assert model.dropout_rate == 0.2
    assert model.dtype == DType.FLOAT32


def test_model_config_widths():
    config = ModelConfig(vocab_sizes=(3, 2, 16), n_continuous=3, mlp_hidden_units_factors=[0.5])
    assert config.head_dim == 4
    assert config.fusion_width == 51
    assert config.hidden_widths == (25,)
    assert ModelConfig.from_dict(config.to_dict()) == config


@pytest.mark.parametrize(
    "kwargs",
    [
        {"embedding_dims": 6, "attention_heads": 4},
        {"embedding_dims": 1, "attention_heads": 1},
        {"vocab_sizes": (0,)},
        {"dropout_rate": 1.0},
        {"mlp_hidden_units_factors": ()},
        {"mlp_hidden_units_factors": (0.01,)},
        {"n_continuous": -1},
    ],
)
def test_model_config_rejects(kwargs):
    with pytest.raises(UsageError):
        ModelConfig(**{"vocab_sizes": (3,), **kwargs})


@pytest.mark.parametrize(
    "kwargs",
    [
        {"learning_rate": 0.0},
        {"weight_decay": -1.0},
        {"beta_1": 1.0},
        {"epsilon": 0.0},
        {"batch_size": 0},
        {"epochs": 0},
        {"patience": 0},
        {"dropout_rate": 1.0},
    ],
)
def test_train_config_rejects(kwargs):
    with pytest.raises(UsageError):
        TrainConfig(**kwargs)


def test_forest_candidate_features():
    assert ForestConfig().n_candidate_features(25) == 5
    assert ForestConfig(features_per_split=0.5).n_candidate_features(25) == 12
    assert ForestConfig().n_candidate_features(1) == 1
    with pytest.raises(UsageError):
        ForestConfig(min_samples_split=1)


def test_pipeline_paths(tmp_path: Path):
    config = PipelineConfig(output_dir=tmp_path)
    assert config.cache_dir == tmp_path / "cache"
    assert config.importances_path == tmp_path / "importances.json"
    assert config.model_path == tmp_path / "model.itctm"


def test_pipeline_builds_sub_configs():
    config = PipelineConfig(seed=5, n_trees=7, callback=False, dropout_rate=0.1)
    assert config.train_config().seed == 5
    assert config.train_config().callback is False
    assert config.train_config().dropout_rate == 0.1
    assert config.forest_config().n_trees == 7
    model = config.model_config([3, 4], 2)
    assert model.vocab_sizes == (3, 4)
    assert model.dropout_rate == 0.1


def test_pipeline_threshold_parsing():
    assert PipelineConfig(selection_threshold="0.25").selection_threshold == 0.25
    assert PipelineConfig().selection_threshold == "mean"
    with pytest.raises(UsageError, match="mean"):
        PipelineConfig(selection_threshold="median")


@pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5])
def test_pipeline_fraction_range(fraction):
    with pytest.raises(UsageError, match="fraction"):
        PipelineConfig(fraction=fraction)


def test_pipeline_rejects_bad_train_values():
    with pytest.raises(UsageError):
        PipelineConfig(batch_size=0)
