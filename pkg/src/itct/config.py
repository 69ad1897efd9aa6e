"""Configuration dataclasses and constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

from itct.errors import UsageError


class Activation(str, Enum):
    RELU = "relu"
    GELU = "gelu"
    SIGMOID = "sigmoid"


class DType(str, Enum):
    FLOAT32 = "float32"
    FLOAT64 = "float64"


# Scenario files in the order balancing expects them; the last one is normal-only.
DATASET_FILE_NAMES: tuple[str, ...] = (
    "scan_A.csv",
    "scan_sU.csv",
    "sparta.csv",
    "mqtt_bruteforce.csv",
    "normal.csv",
)

CACHE_DIRNAME = "cache"
IMPORTANCES_FILENAME = "importances.json"
MODEL_FILENAME = "model.itctm"
RESOLVED_CONFIG_FILENAME = "resolved_config.yaml"


@dataclass(frozen=True)
class ModelConfig:
    """Architecture of an ItctModel. Defaults are the reference hyperparameters."""

    vocab_sizes: tuple[int, ...] = ()
    n_continuous: int = 0
    embedding_dims: int = 16
    transformer_blocks: int = 4
    attention_heads: int = 4
    mlp_hidden_units_factors: tuple[float, ...] = (2.0, 1.0)
    dropout_rate: float = 0.2
    ffn_activation: Activation = Activation.GELU
    head_activation: Activation = Activation.GELU
    attention_dropout: bool = True
    layer_norm_eps: float = 1e-6
    dtype: DType = DType.FLOAT32

    def __post_init__(self) -> None:
        object.__setattr__(self, "vocab_sizes", tuple(int(v) for v in self.vocab_sizes))
        object.__setattr__(
            self, "mlp_hidden_units_factors", tuple(float(f) for f in self.mlp_hidden_units_factors)
        )
        object.__setattr__(self, "ffn_activation", Activation(self.ffn_activation))
        object.__setattr__(self, "head_activation", Activation(self.head_activation))
        object.__setattr__(self, "dtype", DType(self.dtype))
        if self.n_categorical < 1:
            raise UsageError("At least one categorical column is required")
        if any(v < 1 for v in self.vocab_sizes):
            raise UsageError(f"Vocabulary sizes must be >= 1, got {list(self.vocab_sizes)}")
        if self.n_continuous < 0:
            raise UsageError("n_continuous must be >= 0")
        if self.embedding_dims < 2:
            raise UsageError("embedding_dims must be >= 2 (one slot is the column identifier)")
        if self.attention_heads < 1 or self.embedding_dims % self.attention_heads:
            raise UsageError(
                f"embedding_dims ({self.embedding_dims}) must be divisible by "
                f"attention_heads ({self.attention_heads})"
            )
        if self.transformer_blocks < 0:
            raise UsageError("transformer_blocks must be >= 0")
        if not self.mlp_hidden_units_factors or any(
            f <= 0 for f in self.mlp_hidden_units_factors
        ):
            raise UsageError("mlp_hidden_units_factors must be non-empty and positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise UsageError("dropout_rate must be in [0, 1)")
        if any(w < 1 for w in self.hidden_widths):
            raise UsageError(f"MLP hidden widths must be >= 1, got {self.hidden_widths}")

    @property
    def n_categorical(self) -> int:
        return len(self.vocab_sizes)

    @property
    def head_dim(self) -> int:
        return self.embedding_dims // self.attention_heads

    @property
    def fusion_width(self) -> int:
        return self.embedding_dims * self.n_categorical + self.n_continuous

    @property
    def hidden_widths(self) -> tuple[int, ...]:
        return tuple(math.floor(f * self.fusion_width) for f in self.mlp_hidden_units_factors)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["vocab_sizes"] = list(self.vocab_sizes)
        data["mlp_hidden_units_factors"] = list(self.mlp_hidden_units_factors)
        data["ffn_activation"] = self.ffn_activation.value
        data["head_activation"] = self.head_activation.value
        data["dtype"] = self.dtype.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> ModelConfig:
        return cls(**data)


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and loop settings. Defaults are the reference hyperparameters."""

    learning_rate: float = 0.001
    weight_decay: float = 0.0001
    beta_1: float = 0.9
    beta_2: float = 0.999
    epsilon: float = 1e-7
    batch_size: int = 265
    epochs: int = 20
    # None keeps the rate the model was built with
    dropout_rate: float | None = None
    callback: bool = False
    patience: int = 3
    seed: int = 42

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise UsageError("learning_rate must be > 0")
        if self.weight_decay < 0:
            raise UsageError("weight_decay must be >= 0")
        if not (0.0 <= self.beta_1 < 1.0 and 0.0 <= self.beta_2 < 1.0):
            raise UsageError("beta_1 and beta_2 must be in [0, 1)")
        if self.epsilon <= 0:
            raise UsageError("epsilon must be > 0")
        if self.batch_size < 1:
            raise UsageError("batch_size must be >= 1")
        if self.epochs < 1:
            raise UsageError("epochs must be >= 1")
        if self.patience < 1:
            raise UsageError("patience must be >= 1")
        if self.dropout_rate is not None and not 0.0 <= self.dropout_rate < 1.0:
            raise UsageError("dropout_rate must be in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ForestConfig:
    """Random forest used for feature selection.

    ``features_per_split`` of ``None`` means the sqrt rule: ``floor(sqrt(n_features))``.
    """

    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: float | None = None
    bootstrap: bool = True
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise UsageError("n_trees must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise UsageError("max_depth must be >= 0")
        if self.min_samples_split < 2:
            raise UsageError("min_samples_split must be >= 2")
        if self.features_per_split is not None and not 0.0 < self.features_per_split <= 1.0:
            raise UsageError("features_per_split must be in (0, 1]")
        if self.n_jobs < 1:
            raise UsageError("n_jobs must be >= 1")

    def n_candidate_features(self, n_features: int) -> int:
        if self.features_per_split is None:
            return max(1, math.isqrt(n_features))
        return max(1, math.floor(self.features_per_split * n_features))


@dataclass
class PipelineConfig:
    """Fully resolved configuration for a CLI run."""

    dataset_files: list[Path] = field(default_factory=list)
    schema: Path | None = None
    output_dir: Path = Path("itct-run")
    # reference hyperparameters
    learning_rate: float = 0.001
    weight_decay: float = 0.0001
    dropout_rate: float = 0.2
    batch_size: int = 265
    epochs: int = 20
    transformer_blocks: int = 4
    attention_heads: int = 4
    embedding_dims: int = 16
    mlp_hidden_units_factors: list[float] = field(default_factory=lambda: [2.0, 1.0])
    # experiment axes
    feature_selection: bool = True
    callback: bool = True
    patience: int = 3
    force_include: list[str] = field(default_factory=lambda: ["protocol"])
    # seeds and sampling
    seed: int = 42
    fraction: float = 1.0
    # feature selection
    n_trees: int = 100
    max_depth: int | None = None
    selection_cap: int = 500_000
    selection_threshold: str | float = "mean"
    n_jobs: int = 1

    def __post_init__(self) -> None:
        self.dataset_files = [Path(p) for p in self.dataset_files]
        if self.schema is not None:
            self.schema = Path(self.schema)
        self.output_dir = Path(self.output_dir)
        if not 0.0 < self.fraction <= 1.0:
            raise UsageError(f"fraction must be in (0, 1], got {self.fraction}")
        if self.selection_cap < 1:
            raise UsageError("selection_cap must be >= 1")
        if isinstance(self.selection_threshold, str) and self.selection_threshold != "mean":
            try:
                self.selection_threshold = float(self.selection_threshold)
            except ValueError:
                raise UsageError(
                    f"selection_threshold must be 'mean' or a number, "
                    f"got '{self.selection_threshold}'"
                ) from None
        # build once so invalid values surface at load time
        self.train_config()
        self.forest_config()

    @property
    def cache_dir(self) -> Path:
        return self.output_dir / CACHE_DIRNAME

    @property
    def importances_path(self) -> Path:
        return self.output_dir / IMPORTANCES_FILENAME

    @property
    def model_path(self) -> Path:
        return self.output_dir / MODEL_FILENAME

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            weight_decay=self.weight_decay,
            batch_size=self.batch_size,
            epochs=self.epochs,
            dropout_rate=self.dropout_rate,
            callback=self.callback,
            patience=self.patience,
            seed=self.seed,
        )

    def forest_config(self) -> ForestConfig:
        return ForestConfig(
            n_trees=self.n_trees, max_depth=self.max_depth, seed=self.seed, n_jobs=self.n_jobs
        )

    def model_config(self, vocab_sizes: list[int], n_continuous: int) -> ModelConfig:
        return ModelConfig(
            vocab_sizes=tuple(vocab_sizes),
            n_continuous=n_continuous,
            embedding_dims=self.embedding_dims,
            transformer_blocks=self.transformer_blocks,
            attention_heads=self.attention_heads,
            mlp_hidden_units_factors=tuple(self.mlp_hidden_units_factors),
            dropout_rate=self.dropout_rate,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["dataset_files"] = [str(p) for p in self.dataset_files]
        data["schema"] = str(self.schema) if self.schema is not None else None
        data["output_dir"] = str(self.output_dir)
        return data
