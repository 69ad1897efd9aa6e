"""Encoded dataset cache: ``dataset.itctds`` binary plus a ``dataset.json`` sidecar.

Binary layout (little-endian): magic ``ITCTDS1``, int32 split count, then per split
int32 ``rows, m, c`` followed by int32 token ids (rows*m), float32 continuous values
(rows*c) and int32 labels (rows). Splits are stored in train, val, test order.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from itct.data.encoded import EncodedDataset
from itct.data.preprocess import NormalizationStats
from itct.data.schema import Schema, parse_schema
from itct.data.vocab import Vocabulary
from itct.errors import DataError

CACHE_MAGIC = b"ITCTDS1"
BINARY_NAME = "dataset.itctds"
SIDECAR_NAME = "dataset.json"
SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class DatasetCache:
    schema: Schema
    vocabulary: Vocabulary
    normalization: NormalizationStats
    train: EncodedDataset
    val: EncodedDataset
    test: EncodedDataset
    imputation: dict[str, dict[str, float]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    @property
    def splits(self) -> dict[str, EncodedDataset]:
        return {"train": self.train, "val": self.val, "test": self.test}

    @property
    def imputation_means(self) -> dict[str, float]:
        """Row-weighted mean of the per-file imputation means, for inference."""
        files = self.summary.get("files", {})
        totals: dict[str, float] = {}
        weight = 0
        for name, means in self.imputation.items():
            rows = files.get(name, {}).get("loaded_rows", 1)
            weight += rows
            for col, mean in means.items():
                totals[col] = totals.get(col, 0.0) + mean * rows
        return {col: total / weight for col, total in totals.items()} if weight else {}


def write_cache(directory: Path, cache: DatasetCache) -> tuple[Path, Path]:
    directory.mkdir(parents=True, exist_ok=True)
    payload = encode_splits([cache.train, cache.val, cache.test])
    binary_path = directory / BINARY_NAME
    binary_path.write_bytes(payload)

    sidecar = {
        "format": CACHE_MAGIC.decode(),
        "schema": cache.schema.to_text(),
        "cat_names": list(cache.train.cat_names),
        "cont_names": list(cache.train.cont_names),
        "vocabulary": cache.vocabulary.to_dict(),
        "normalization": cache.normalization.to_dict(),
        "imputation": cache.imputation,
        "summary": cache.summary,
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    sidecar_path = directory / SIDECAR_NAME
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return binary_path, sidecar_path


def read_cache(directory: Path) -> DatasetCache:
    binary_path = directory / BINARY_NAME
    sidecar_path = directory / SIDECAR_NAME
    for p in (binary_path, sidecar_path):
        if not p.is_file():
            raise DataError(f"Dataset cache not found: {p} (run 'itct preprocess' first)")
    try:
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"Malformed cache sidecar {sidecar_path}: {e}") from None

    payload = binary_path.read_bytes()
    if hashlib.sha256(payload).hexdigest() != sidecar.get("sha256"):
        raise DataError(f"Checksum mismatch for {binary_path}")
    cat_names = tuple(sidecar["cat_names"])
    cont_names = tuple(sidecar["cont_names"])
    train, val, test = decode_splits(payload, cat_names, cont_names)
    return DatasetCache(
        schema=parse_schema(sidecar["schema"]),
        vocabulary=Vocabulary.from_dict(sidecar["vocabulary"]),
        normalization=NormalizationStats.from_dict(sidecar["normalization"]),
        train=train,
        val=val,
        test=test,
        imputation=sidecar.get("imputation", {}),
        summary=sidecar.get("summary", {}),
    )


def encode_splits(splits: list[EncodedDataset]) -> bytes:
    parts = [CACHE_MAGIC, struct.pack("<i", len(splits))]
    for ds in splits:
        rows, m = ds.cat.shape
        parts.append(struct.pack("<iii", rows, m, ds.cont.shape[1]))
        parts.append(ds.cat.astype("<i4").tobytes())
        parts.append(ds.cont.astype("<f4").tobytes())
        parts.append(ds.labels.astype("<i4").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, payload: bytes, offset: int) -> None:
        self.payload = payload
        self.offset = offset

    def _advance(self, size: int) -> int:
        start = self.offset
        if start + size > len(self.payload):
            raise DataError("Encoded dataset cache is truncated")
        self.offset += size
        return start

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack_from(fmt, self.payload, self._advance(struct.calcsize(fmt)))

    def array(self, dtype: str, count: int) -> np.ndarray:
        start = self._advance(4 * count)
        return np.frombuffer(self.payload, dtype=dtype, count=count, offset=start)

    @property
    def exhausted(self) -> bool:
        return self.offset == len(self.payload)


def decode_splits(
    payload: bytes, cat_names: tuple[str, ...], cont_names: tuple[str, ...]
) -> list[EncodedDataset]:
    if not payload.startswith(CACHE_MAGIC):
        raise DataError("Not an encoded dataset cache (bad magic)")
    reader = _Reader(payload, len(CACHE_MAGIC))
    (n_splits,) = reader.unpack("<i")
    splits = []
    for _ in range(n_splits):
        rows, m, c = reader.unpack("<iii")
        if m != len(cat_names) or c != len(cont_names):
            raise DataError("Cache column counts do not match its sidecar")
        cat = reader.array("<i4", rows * m).astype(np.int64).reshape(rows, m)
        cont = reader.array("<f4", rows * c).astype(np.float32).reshape(rows, c)
        labels = reader.array("<i4", rows).astype(np.int8)
        splits.append(EncodedDataset(cat, cont, labels, cat_names, cont_names))
    if not reader.exhausted:
        raise DataError("Encoded dataset cache has trailing bytes")
    if len(splits) != len(SPLIT_NAMES):
        raise DataError(f"Cache holds {len(splits)} splits, expected {len(SPLIT_NAMES)}")
    return splits
