"""Integer/float encoded datasets, splitting and batching."""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from itct.data.preprocess import NormalizationStats, normalize_values
from itct.data.table import DatasetTable
from itct.data.vocab import Vocabulary
from itct.errors import DataError, UsageError


class Batch(NamedTuple):
    cat: np.ndarray  # (n, m) int64 token ids
    cont: np.ndarray  # (n, c) float
    labels: np.ndarray  # (n,) int8


@dataclass(frozen=True)
class EncodedDataset:
    """Model-ready matrices. Column names are kept so features can be re-selected."""

    cat: np.ndarray
    cont: np.ndarray
    labels: np.ndarray
    cat_names: tuple[str, ...]
    cont_names: tuple[str, ...]

    def __post_init__(self) -> None:
        n = self.labels.shape[0]
        if self.cat.shape != (n, len(self.cat_names)):
            raise DataError(f"cat matrix shape {self.cat.shape} != ({n}, {len(self.cat_names)})")
        if self.cont.shape != (n, len(self.cont_names)):
            raise DataError(
                f"cont matrix shape {self.cont.shape} != ({n}, {len(self.cont_names)})"
            )
        if self.cont.size and not np.isfinite(self.cont).all():
            raise DataError("Continuous matrix contains non-finite values")

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def feature_names(self) -> list[str]:
        return [*self.cat_names, *self.cont_names]

    def take(self, indices: np.ndarray) -> EncodedDataset:
        return EncodedDataset(
            self.cat[indices], self.cont[indices], self.labels[indices],
            self.cat_names, self.cont_names,
        )

    def select(self, features: list[str]) -> EncodedDataset:
        """Keep only ``features`` (categorical and continuous keep their own order)."""
        unknown = [f for f in features if f not in self.feature_names]
        if unknown:
            raise DataError(f"Features not in dataset: {', '.join(unknown)}")
        wanted = set(features)
        cat_idx = [i for i, n in enumerate(self.cat_names) if n in wanted]
        cont_idx = [i for i, n in enumerate(self.cont_names) if n in wanted]
        return EncodedDataset(
            self.cat[:, cat_idx], self.cont[:, cont_idx], self.labels,
            tuple(self.cat_names[i] for i in cat_idx),
            tuple(self.cont_names[i] for i in cont_idx),
        )

    def as_batch(self) -> Batch:
        return Batch(self.cat, self.cont, self.labels)

    def class_counts(self) -> tuple[int, int]:
        attack = int(self.labels.sum())
        return len(self) - attack, attack


def encode_frame(
    frame: pd.DataFrame,
    labels: np.ndarray,
    vocab: Vocabulary,
    stats: NormalizationStats,
    cat_names: list[str],
    cont_names: list[str],
    dtype: np.dtype | type = np.float32,
) -> EncodedDataset:
    n = len(frame)
    cat = np.zeros((n, len(cat_names)), dtype=np.int64)
    for j, name in enumerate(cat_names):
        cat[:, j] = vocab.encode_column(name, frame[name])
    cont = np.zeros((n, len(cont_names)), dtype=dtype)
    for j, name in enumerate(cont_names):
        values = frame[name].to_numpy(dtype=np.float64)
        if np.isnan(values).any():
            raise DataError(f"Column '{name}' has missing values; impute before encoding")
        cont[:, j] = normalize_values(values, stats.means[name], stats.stds[name])
    return EncodedDataset(
        cat, cont, np.asarray(labels, dtype=np.int8), tuple(cat_names), tuple(cont_names)
    )


def encode(
    table: DatasetTable,
    vocab: Vocabulary,
    stats: NormalizationStats,
    selected: list[str] | None = None,
) -> EncodedDataset:
    """Token ids for categorical features, z-scores for continuous ones."""
    schema = table.schema
    if selected is None:
        selected = schema.features
    unknown = [f for f in selected if f not in schema.features]
    if unknown:
        raise DataError(f"Selected features not in schema: {', '.join(unknown)}")
    wanted = set(selected)
    cat_names = [n for n in schema.categorical if n in wanted]
    cont_names = [n for n in schema.continuous if n in wanted]
    return encode_frame(table.frame, table.labels, vocab, stats, cat_names, cont_names)


@dataclass(frozen=True)
class SplitSpec:
    train: float = 0.80
    val: float = 0.10
    test: float = 0.10
    seed: int = 42

    def __post_init__(self) -> None:
        if min(self.train, self.val, self.test) <= 0:
            raise UsageError("Every split fraction must be > 0")
        if not math.isclose(self.train + self.val + self.test, 1.0, abs_tol=1e-9):
            raise UsageError("Split fractions must sum to 1.0")


def split_indices(n: int, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded shuffle, then cut at floor(train*n) and floor((train+val)*n)."""
    if n == 0:
        raise DataError("Cannot split an empty dataset")
    order = np.random.default_rng(spec.seed).permutation(n)
    first = math.floor(spec.train * n + 1e-9)
    second = math.floor((spec.train + spec.val) * n + 1e-9)
    parts = order[:first], order[first:second], order[second:]
    if any(p.size == 0 for p in parts):
        raise DataError(f"Dataset of {n} rows is too small to split {spec}")
    return parts


def split(
    dataset: EncodedDataset, spec: SplitSpec
) -> tuple[EncodedDataset, EncodedDataset, EncodedDataset]:
    train, val, test = split_indices(len(dataset), spec)
    return dataset.take(train), dataset.take(val), dataset.take(test)


def batches(
    dataset: EncodedDataset | Batch, batch_size: int, *, shuffle: bool = False, seed: int = 0
) -> Iterator[Batch]:
    """Yield ceil(n / batch_size) batches; the last one may be short."""
    if batch_size < 1:
        raise UsageError("batch_size must be >= 1")
    cat, cont, labels = dataset.as_batch() if isinstance(dataset, EncodedDataset) else dataset
    n = labels.shape[0]
    order = np.random.default_rng(seed).permutation(n) if shuffle else np.arange(n)
    for start in range(0, n, batch_size):
        idx = order[start : start + batch_size]
        yield Batch(cat[idx], cont[idx], labels[idx])


def stratified_indices(
    labels: np.ndarray, *, seed: int, fraction: float | None = None, cap: int | None = None
) -> np.ndarray:
    """Seeded per-class sample keeping class proportions; returns sorted row indices."""
    n = labels.shape[0]
    target = n
    if fraction is not None:
        target = min(target, math.floor(fraction * n))
    if cap is not None:
        target = min(target, cap)
    if target >= n:
        return np.arange(n)
    rng = np.random.default_rng(seed)
    chosen: list[np.ndarray] = []
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        k = round(idx.size * target / n)
        if idx.size and k == 0:
            k = 1
        chosen.append(rng.choice(idx, size=min(k, idx.size), replace=False))
    return np.sort(np.concatenate(chosen))


def stratified_subsample(
    dataset: EncodedDataset,
    *,
    seed: int,
    fraction: float | None = None,
    cap: int | None = None,
) -> EncodedDataset:
    return dataset.take(stratified_indices(dataset.labels, seed=seed, fraction=fraction, cap=cap))
