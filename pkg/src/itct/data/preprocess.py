"""Per-file cleaning: mean imputation, class balancing and z-score normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from itct.data.table import ATTACK, NORMAL, ClassCounts, DatasetTable
from itct.data.vocab import UNK_TOKEN
from itct.errors import DataError

N_CAPTURE_FILES = 5


@dataclass(frozen=True)
class ImputationStats:
    """Mean of the non-missing values of each continuous column."""

    means: dict[str, float]

    def to_dict(self) -> dict[str, float]:
        return dict(self.means)


@dataclass(frozen=True)
class NormalizationStats:
    """Per continuous column (mean, population std), fitted on the training split."""

    means: dict[str, float]
    stds: dict[str, float]

    def to_dict(self) -> dict[str, dict[str, float]]:
        return {name: {"mean": self.means[name], "std": self.stds[name]} for name in self.means}

    @classmethod
    def from_dict(cls, data: dict[str, dict[str, float]]) -> NormalizationStats:
        return cls(
            means={k: float(v["mean"]) for k, v in data.items()},
            stds={k: float(v["std"]) for k, v in data.items()},
        )

    def subset(self, columns: list[str]) -> NormalizationStats:
        return NormalizationStats(
            {c: self.means[c] for c in columns}, {c: self.stds[c] for c in columns}
        )


def impute_missing(table: DatasetTable) -> tuple[DatasetTable, ImputationStats]:
    """Fill continuous gaps with the column mean and categorical gaps with UNK."""
    frame = table.frame.copy()
    means: dict[str, float] = {}
    for name in table.schema.continuous:
        column = frame[name]
        present = column.dropna()
        if present.empty:
            if len(column):
                raise DataError(f"Continuous column '{name}' has no values, mean undefined")
            means[name] = 0.0
            continue
        mean = float(present.mean())
        if not np.isfinite(mean):
            raise DataError(f"Continuous column '{name}' has a non-finite mean")
        means[name] = mean
        frame[name] = column.fillna(mean)
    for name in table.schema.categorical:
        column = frame[name]
        frame[name] = column.where(column.notna(), UNK_TOKEN).astype(object)
    return table.with_frame(frame), ImputationStats(means)


def apply_imputation(
    frame: pd.DataFrame, stats: ImputationStats, categorical: list[str]
) -> pd.DataFrame:
    """Fill gaps in an inference frame with means learned at training time."""
    frame = frame.copy()
    for name, mean in stats.means.items():
        if name in frame:
            frame[name] = frame[name].fillna(mean)
    for name in categorical:
        frame[name] = frame[name].where(frame[name].notna(), UNK_TOKEN).astype(object)
    return frame


@dataclass(frozen=True)
class BalancePlan:
    """Row counts produced by balancing five capture files."""

    kept: tuple[ClassCounts, ...]
    surplus_attack_pool: int
    appended_attack: int


def balance_plan(counts: list[ClassCounts]) -> BalancePlan:
    """Counting rule behind :func:`balance_files`, without touching rows."""
    if len(counts) != N_CAPTURE_FILES:
        raise DataError(f"Balancing expects {N_CAPTURE_FILES} files, got {len(counts)}")
    *mixed, normal_only = counts
    if normal_only.attack:
        raise DataError(
            f"File 5 must contain only normal rows, found {normal_only.attack} attack rows"
        )
    kept: list[ClassCounts] = []
    pool = 0
    for i, c in enumerate(mixed, 1):
        if c.normal == 0 or c.attack == 0:
            raise DataError(f"File {i} has zero rows of one class ({c.normal}/{c.attack})")
        minority = min(c.normal, c.attack)
        pool += c.attack - minority
        kept.append(ClassCounts(minority, minority))
    appended = min(pool, normal_only.normal)
    kept.append(ClassCounts(normal_only.normal, appended))
    return BalancePlan(tuple(kept), pool, appended)


def balance_files(tables: list[DatasetTable], seed: int) -> list[DatasetTable]:
    """Undersample files 1-4 to their minority count; move surplus attacks into file 5.

    File 5 gets ``min(pool, normal count)`` surplus attack rows drawn uniformly
    without replacement. Kept rows preserve their file order.
    """
    plan = balance_plan([t.class_counts() for t in tables])
    rng = np.random.default_rng(seed)

    balanced: list[DatasetTable] = []
    pool: list[DatasetTable] = []
    for table, target in zip(tables[:-1], plan.kept[:-1], strict=True):
        labels = table.labels
        normal_idx = np.flatnonzero(labels == NORMAL)
        attack_idx = np.flatnonzero(labels == ATTACK)
        keep_normal = _draw(rng, normal_idx, target.normal)
        keep_attack = _draw(rng, attack_idx, target.attack)
        balanced.append(table.take(np.sort(np.concatenate([keep_normal, keep_attack]))))
        surplus = np.setdiff1d(attack_idx, keep_attack, assume_unique=True)
        if surplus.size:
            pool.append(table.take(surplus))

    last = tables[-1]
    if plan.appended_attack:
        pooled = pd.concat([p.frame for p in pool], ignore_index=True)
        chosen = np.sort(_draw(rng, np.arange(len(pooled)), plan.appended_attack))
        frame = pd.concat([last.frame, pooled.iloc[chosen]], ignore_index=True)
        last = last.with_frame(frame.astype(last.frame.dtypes.to_dict()))
    balanced.append(last)
    return balanced


def _draw(rng: np.random.Generator, indices: np.ndarray, size: int) -> np.ndarray:
    if size >= indices.size:
        return indices
    return np.sort(rng.choice(indices, size=size, replace=False))


def fit_normalization(train: DatasetTable) -> NormalizationStats:
    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    for name in train.schema.continuous:
        values = train.frame[name].to_numpy(dtype=np.float64)
        if values.size and np.isnan(values).any():
            raise DataError(f"Column '{name}' still has missing values; impute first")
        means[name] = float(values.mean()) if values.size else 0.0
        stds[name] = float(values.std()) if values.size else 0.0
    return NormalizationStats(means, stds)


def normalize_values(values: np.ndarray, mean: float, std: float) -> np.ndarray:
    if std == 0.0:
        return np.zeros_like(values, dtype=np.float64)
    return (values - mean) / std


def apply_normalization(table: DatasetTable, stats: NormalizationStats) -> DatasetTable:
    frame = table.frame.copy()
    for name in table.schema.continuous:
        values = frame[name].to_numpy(dtype=np.float64)
        frame[name] = normalize_values(values, stats.means[name], stats.stds[name])
    return table.with_frame(frame)
