"""Raw tabular traffic records and CSV loading."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd

from itct.data.schema import Column, ColumnKind, Schema
from itct.errors import DataError

CHUNK_ROWS = 200_000
NORMAL = 0
ATTACK = 1


class ClassCounts(NamedTuple):
    normal: int
    attack: int

    @property
    def total(self) -> int:
        return self.normal + self.attack


@dataclass(frozen=True)
class DatasetTable:
    """Records of one or more capture files.

    ``frame`` holds one column per non-ignored schema column, in schema order:
    continuous cells are float64 (NaN = missing), categorical cells are ``str`` or
    ``None``, the label is int8 in {0, 1}. Frames are never mutated in place.
    """

    schema: Schema
    frame: pd.DataFrame

    def __post_init__(self) -> None:
        expected = [c.name for c in self.schema.loaded]
        if list(self.frame.columns) != expected:
            raise DataError(
                f"Table columns {list(self.frame.columns)} do not match schema {expected}"
            )

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def labels(self) -> np.ndarray:
        return self.frame[self.schema.label].to_numpy(dtype=np.int8)

    def class_counts(self) -> ClassCounts:
        labels = self.labels
        attack = int(labels.sum())
        return ClassCounts(normal=len(labels) - attack, attack=attack)

    def take(self, indices: np.ndarray) -> DatasetTable:
        return DatasetTable(self.schema, self.frame.iloc[indices].reset_index(drop=True))

    def with_frame(self, frame: pd.DataFrame) -> DatasetTable:
        return DatasetTable(self.schema, frame)


def concat_tables(tables: list[DatasetTable]) -> DatasetTable:
    if not tables:
        raise DataError("Nothing to concatenate")
    schema = tables[0].schema
    frame = pd.concat([t.frame for t in tables], ignore_index=True)
    return DatasetTable(schema, _restore_dtypes(frame, schema.loaded))


def load_csv(path: Path, schema: Schema) -> DatasetTable:
    """Load one capture CSV. Header must match the schema by name, in any order."""
    columns = list(schema.columns)
    cells, _ = read_cells(path, [c.header for c in columns], allow_extra=False)
    frame = convert_cells(cells, schema.loaded, path=path)
    return DatasetTable(schema, frame)


def load_features_csv(path: Path, columns: list[Column]) -> tuple[pd.DataFrame, list[str]]:
    """Load feature columns for inference; extra CSV columns are returned, not rejected."""
    cells, extras = read_cells(path, [c.header for c in columns], allow_extra=True)
    return convert_cells(cells, columns, path=path), extras


def read_cells(
    path: Path, expected: list[str], *, allow_extra: bool
) -> tuple[pd.DataFrame, list[str]]:
    """Read a CSV as strings, validating the header and every row's cell count."""
    if not path.is_file():
        raise DataError(f"File not found: {path}")

    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file, header row expected") from None

        missing = [h for h in expected if h not in header]
        extras = [h for h in header if h not in expected]
        if missing or (extras and not allow_extra):
            parts = []
            if missing:
                parts.append(f"missing columns: {', '.join(missing)}")
            if extras and not allow_extra:
                parts.append(f"unexpected columns: {', '.join(extras)}")
            raise DataError(f"{path}: header does not match schema ({'; '.join(parts)})")

        chunks: list[pd.DataFrame] = []
        rows: list[list[str]] = []
        width = len(header)
        for row in reader:
            if not row:
                continue
            if len(row) != width:
                raise DataError(
                    f"{path}:{reader.line_num}: expected {width} cells, found {len(row)}"
                )
            rows.append(row)
            if len(rows) >= CHUNK_ROWS:
                chunks.append(pd.DataFrame(rows, columns=header)[expected])
                rows = []
        if rows or not chunks:
            chunks.append(pd.DataFrame(rows, columns=header, dtype=object)[expected])

    frame = pd.concat(chunks, ignore_index=True) if len(chunks) > 1 else chunks[0]
    return frame, extras


def convert_cells(cells: pd.DataFrame, columns: list[Column], *, path: Path) -> pd.DataFrame:
    """Turn string cells into typed columns named after the schema."""
    out: dict[str, pd.Series] = {}
    for col in columns:
        raw = cells[col.header].astype(object)
        stripped = raw.map(lambda v: v.strip() if isinstance(v, str) else v)
        if col.kind == ColumnKind.CONTINUOUS:
            out[col.name] = pd.to_numeric(stripped, errors="coerce").astype(np.float64)
        elif col.kind == ColumnKind.CATEGORICAL:
            out[col.name] = stripped.map(lambda v: v if isinstance(v, str) and v else None)
        elif col.kind == ColumnKind.LABEL:
            values = pd.to_numeric(stripped, errors="coerce")
            bad = ~values.isin([NORMAL, ATTACK])
            if bad.any():
                first = int(np.flatnonzero(bad.to_numpy())[0])
                raise DataError(
                    f"{path}:{first + 2}: label '{raw.iloc[first]}' is not 0 or 1"
                )
            out[col.name] = values.astype(np.int8)
    frame = pd.DataFrame(out, columns=[c.name for c in columns], index=cells.index)
    return _restore_dtypes(frame, columns)


def _restore_dtypes(frame: pd.DataFrame, columns: list[Column]) -> pd.DataFrame:
    # empty frames and concat can lose the per-kind dtypes
    dtypes = {
        ColumnKind.CONTINUOUS: np.float64,
        ColumnKind.CATEGORICAL: object,
        ColumnKind.LABEL: np.int8,
    }
    return frame.astype({c.name: dtypes[c.kind] for c in columns})
