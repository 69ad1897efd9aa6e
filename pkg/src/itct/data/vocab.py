"""Per-column token vocabularies backing the embedding lookup tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from itct.data.table import DatasetTable
from itct.errors import DataError

UNK_TOKEN = "[UNK]"
UNK_ID = 0


@dataclass(frozen=True)
class Vocabulary:
    """Token -> id map per categorical column. Id 0 is UNK in every column."""

    columns: dict[str, dict[str, int]]

    def __post_init__(self) -> None:
        for name, table in self.columns.items():
            if table.get(UNK_TOKEN) != UNK_ID:
                raise DataError(f"Vocabulary for '{name}' lacks {UNK_TOKEN} at id {UNK_ID}")
            if sorted(table.values()) != list(range(len(table))):
                raise DataError(f"Vocabulary ids for '{name}' are not contiguous from 0")

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def size(self, column: str) -> int:
        return len(self._table(column))

    def sizes(self, columns: list[str]) -> list[int]:
        return [self.size(c) for c in columns]

    def encode_column(self, column: str, values: pd.Series) -> np.ndarray:
        """Map tokens to ids; missing and unseen tokens become UNK."""
        table = self._table(column)
        ids = values.map(table)
        return ids.fillna(UNK_ID).to_numpy(dtype=np.int64)

    def subset(self, columns: list[str]) -> Vocabulary:
        return Vocabulary({c: dict(self._table(c)) for c in columns})

    def to_dict(self) -> dict[str, dict[str, int]]:
        return {name: dict(table) for name, table in self.columns.items()}

    @classmethod
    def from_dict(cls, data: dict[str, dict[str, int]]) -> Vocabulary:
        return cls(
            {name: {str(k): int(v) for k, v in table.items()} for name, table in data.items()}
        )

    def _table(self, column: str) -> dict[str, int]:
        try:
            return self.columns[column]
        except KeyError:
            raise DataError(f"No vocabulary for column '{column}'") from None


def build_vocabulary(train: DatasetTable) -> Vocabulary:
    """Assign ids 1..K per categorical column in order of first appearance."""
    columns: dict[str, dict[str, int]] = {}
    for name in train.schema.categorical:
        table = {UNK_TOKEN: UNK_ID}
        series = train.frame[name]
        for token in pd.unique(series[series.notna()]):
            if token not in table:
                table[token] = len(table)
        columns[name] = table
    return Vocabulary(columns)
