"""Self-contained model files.

Layout: magic ``ITCTM1``, u32 format version, u32 manifest length, 32-byte
SHA-256 of (manifest + payload), the UTF-8 JSON manifest, then raw
little-endian tensor sections in manifest order. The manifest carries the
config, vocabulary, normalization and imputation statistics, the feature
lists and per-tensor name/shape/offset entries.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from itct.config import ModelConfig
from itct.data.encoded import EncodedDataset, encode_frame
from itct.data.preprocess import ImputationStats, NormalizationStats, apply_imputation
from itct.data.vocab import Vocabulary
from itct.errors import DataError, ModelFormatError, ShapeError
from itct.model.network import ItctModel

MAGIC = b"ITCTM1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<6sII32s")


@dataclass
class ModelFile:
    """A model plus everything needed to encode raw rows for it."""

    model: ItctModel
    vocabulary: Vocabulary
    normalization: NormalizationStats
    cat_features: tuple[str, ...]
    cont_features: tuple[str, ...]
    imputation: ImputationStats = field(default_factory=lambda: ImputationStats({}))

    def __post_init__(self) -> None:
        self.cat_features = tuple(self.cat_features)
        self.cont_features = tuple(self.cont_features)
        sizes = tuple(self.vocabulary.sizes(list(self.cat_features)))
        if sizes != self.model.config.vocab_sizes:
            raise DataError(
                f"Vocabulary sizes {list(sizes)} do not match the model's "
                f"{list(self.model.config.vocab_sizes)}"
            )
        if len(self.cont_features) != self.model.config.n_continuous:
            raise DataError(
                f"{len(self.cont_features)} continuous features for a model expecting "
                f"{self.model.config.n_continuous}"
            )

    @property
    def features(self) -> list[str]:
        return [*self.cat_features, *self.cont_features]

    def missing_features(self, available: list[str]) -> list[str]:
        return [f for f in self.features if f not in available]

    def check_features(self, available: list[str]) -> None:
        missing = self.missing_features(available)
        if missing:
            raise DataError(f"Input lacks the model's features: {', '.join(missing)}")

    def encode(self, frame: pd.DataFrame, labels: np.ndarray | None = None) -> EncodedDataset:
        """Impute, tokenize and normalize raw feature columns for this model."""
        self.check_features(list(frame.columns))
        filled = apply_imputation(
            frame[self.features],
            ImputationStats(
                {k: v for k, v in self.imputation.means.items() if k in self.cont_features}
            ),
            list(self.cat_features),
        )
        for name in self.cont_features:
            if filled[name].isna().any():
                # no stored mean for this column
                filled[name] = filled[name].fillna(self.normalization.means[name])
        if labels is None:
            labels = np.zeros(len(frame), dtype=np.int8)
        return encode_frame(
            filled,
            labels,
            self.vocabulary,
            self.normalization,
            list(self.cat_features),
            list(self.cont_features),
            dtype=self.model.dtype,
        )

    def dataset_features_match(self, dataset: EncodedDataset) -> None:
        if dataset.cat_names != self.cat_features or dataset.cont_names != self.cont_features:
            raise DataError(
                f"Dataset features {dataset.feature_names} do not match model features "
                f"{self.features}"
            )

    # -- io -----------------------------------------------------------------

    def manifest(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "config": self.model.config.to_dict(),
            "vocabulary": self.vocabulary.to_dict(),
            "normalization": self.normalization.to_dict(),
            "imputation": self.imputation.to_dict(),
            "features": {
                "categorical": list(self.cat_features),
                "continuous": list(self.cont_features),
            },
        }

    def to_bytes(self) -> bytes:
        manifest = self.manifest()
        dtype = self.model.dtype.newbyteorder("<")
        sections: list[bytes] = []
        tensors = []
        offset = 0
        for p in self.model.params():
            raw = p.value.astype(dtype).tobytes()
            tensors.append({"name": p.name, "shape": list(p.shape), "offset": offset})
            sections.append(raw)
            offset += len(raw)
        manifest["tensors"] = tensors
        manifest["dtype"] = dtype.str
        manifest["payload_bytes"] = offset
        manifest_bytes = json.dumps(manifest, sort_keys=True).encode("utf-8")
        payload = b"".join(sections)
        digest = hashlib.sha256(manifest_bytes + payload).digest()
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(manifest_bytes), digest)
        return header + manifest_bytes + payload

    def save(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_bytes())
        return path

    @classmethod
    def from_bytes(cls, data: bytes, source: str = "<bytes>") -> ModelFile:
        if len(data) < _HEADER.size:
            raise ModelFormatError(f"{source}: truncated model file (header incomplete)")
        magic, version, manifest_len, digest = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise ModelFormatError(f"{source}: not an ITCT model file (bad magic)")
        if version > FORMAT_VERSION:
            raise ModelFormatError(
                f"{source}: format version {version} is newer than supported "
                f"version {FORMAT_VERSION}; upgrade itct"
            )
        if version < 1:
            raise ModelFormatError(f"{source}: invalid format version {version}")
        body = data[_HEADER.size :]
        if len(body) < manifest_len:
            raise ModelFormatError(f"{source}: truncated model file (manifest incomplete)")
        if hashlib.sha256(body).digest() != digest:
            declared = _declared_payload(body[:manifest_len])
            if declared is not None and len(body) - manifest_len < declared:
                raise ModelFormatError(f"{source}: truncated model file (tensor data incomplete)")
            raise ModelFormatError(f"{source}: checksum mismatch, file is corrupted")

        manifest = json.loads(body[:manifest_len].decode("utf-8"))
        payload = body[manifest_len:]
        if len(payload) != manifest["payload_bytes"]:
            raise ModelFormatError(
                f"{source}: payload is {len(payload)} bytes, manifest declares "
                f"{manifest['payload_bytes']}"
            )
        config = ModelConfig.from_dict(manifest["config"])
        model = ItctModel(config)
        dtype = np.dtype(manifest["dtype"])
        state: dict[str, np.ndarray] = {}
        for entry in manifest["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape, dtype=np.int64))
            end = entry["offset"] + count * dtype.itemsize
            if end > len(payload):
                raise ModelFormatError(f"{source}: tensor {entry['name']} runs past end of file")
            values = np.frombuffer(payload, dtype=dtype, count=count, offset=entry["offset"])
            state[entry["name"]] = values.reshape(shape).astype(model.dtype)
        try:
            model.load_state(state)
        except ShapeError as e:
            raise ModelFormatError(f"{source}: tensors do not fit the stored config: {e}") from None

        features = manifest["features"]
        return cls(
            model=model,
            vocabulary=Vocabulary.from_dict(manifest["vocabulary"]),
            normalization=NormalizationStats.from_dict(manifest["normalization"]),
            cat_features=tuple(features["categorical"]),
            cont_features=tuple(features["continuous"]),
            imputation=ImputationStats(
                {k: float(v) for k, v in manifest.get("imputation", {}).items()}
            ),
        )

    @classmethod
    def load(cls, path: Path) -> ModelFile:
        if not path.is_file():
            raise DataError(f"Model file not found: {path}")
        return cls.from_bytes(path.read_bytes(), source=str(path))


def _declared_payload(manifest_bytes: bytes) -> int | None:
    try:
        return int(json.loads(manifest_bytes.decode("utf-8"))["payload_bytes"])
    except (ValueError, KeyError, TypeError, UnicodeDecodeError):
        return None


def file_digest(path: Path) -> str:
    """Hex SHA-256 of a whole model file, for determinism checks."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


def save_model(model_file: ModelFile, path: Path) -> Path:
    return model_file.save(path)


def load_model(path: Path) -> ModelFile:
    return ModelFile.load(path)
