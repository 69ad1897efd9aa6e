"""Supervised training loop and fine-tuning from a saved model."""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from itct.config import TrainConfig
from itct.data.encoded import EncodedDataset, batches
from itct.data.table import DatasetTable
from itct.errors import DataError, UsageError
from itct.model.loss import binary_cross_entropy
from itct.model.network import ItctModel
from itct.model.serialize import ModelFile
from itct.training.callbacks import EarlyStopping
from itct.training.history import EpochRecord, History, StopReason
from itct.training.optimizer import AdamW
from itct.utils.console import print_verbose

FINE_TUNE_DEFAULTS = {"learning_rate": 0.0001, "epochs": 10}
EVAL_BATCH = 4096

EpochCallback = Callable[[EpochRecord], None]


def predict(
    model: ItctModel, dataset: EncodedDataset, batch_size: int = EVAL_BATCH
) -> np.ndarray:
    """Eval-mode probabilities for every row, in dataset order."""
    out = [model.forward(b, train_mode=False) for b in batches(dataset, batch_size)]
    return np.concatenate(out) if out else np.zeros(0, dtype=model.dtype)


def evaluate_loss(
    model: ItctModel, dataset: EncodedDataset, batch_size: int = EVAL_BATCH
) -> tuple[float, float]:
    """(mean BCE, accuracy at 0.5) in eval mode."""
    probs = predict(model, dataset, batch_size)
    loss = binary_cross_entropy(probs, dataset.labels)
    acc = float(np.mean((probs >= 0.5) == (dataset.labels == 1))) if len(dataset) else math.nan
    return loss, acc


def train(
    model: ItctModel,
    train_set: EncodedDataset,
    val_set: EncodedDataset,
    config: TrainConfig,
    on_epoch: EpochCallback | None = None,
) -> tuple[ItctModel, History]:
    """Mini-batch AdamW; optional early stopping restores the best-validation weights."""
    if len(train_set) == 0:
        raise DataError("Training set is empty")
    if len(val_set) == 0:
        raise DataError("Validation set is empty")

    seeds = np.random.SeedSequence(config.seed).spawn(2)
    shuffle_rng = np.random.default_rng(seeds[0])
    dropout_rng = np.random.default_rng(seeds[1])
    if config.dropout_rate is not None:
        model.set_dropout_rate(config.dropout_rate)
    optimizer = AdamW(model.params(), config)
    stopper = EarlyStopping(config.patience) if config.callback else None
    history = History()

    for epoch in range(1, config.epochs + 1):
        start = time.perf_counter()
        total, seen = 0.0, 0
        shuffle_seed = int(shuffle_rng.integers(2**31))
        for batch in batches(train_set, config.batch_size, shuffle=True, seed=shuffle_seed):
            loss = model.compute_gradients(batch, rng=dropout_rng)
            optimizer.step()
            total += loss * len(batch.labels)
            seen += len(batch.labels)
        val_loss, val_acc = evaluate_loss(model, val_set)
        record = EpochRecord(
            epoch=epoch,
            train_loss=total / seen,
            val_loss=val_loss,
            val_acc=val_acc,
            seconds=time.perf_counter() - start,
        )
        history.append(record)
        print_verbose(
            f"epoch {epoch}/{config.epochs}: loss {record.train_loss:.4f} "
            f"val_loss {val_loss:.4f} val_acc {val_acc:.4f}"
        )
        if on_epoch is not None:
            on_epoch(record)
        if stopper is not None and stopper.update(epoch, val_loss, model.state):
            history.stop_reason = StopReason.EARLY_STOPPED
            break

    if stopper is not None and stopper.best_state is not None:
        model.load_state(stopper.best_state)
        history.best_epoch = stopper.best_epoch
        print_verbose(f"restored weights from epoch {stopper.best_epoch}")
    return model, history


def holdout_split(
    dataset: EncodedDataset, val_fraction: float, seed: int
) -> tuple[EncodedDataset, EncodedDataset]:
    n = len(dataset)
    if n < 2:
        raise DataError(f"Need at least 2 rows to hold out a validation set, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    n_val = min(max(1, math.floor(val_fraction * n)), n - 1)
    return dataset.take(order[n_val:]), dataset.take(order[:n_val])


def fine_tune(
    model_path: Path,
    table: DatasetTable,
    overrides: dict | None = None,
    output_path: Path | None = None,
    *,
    val_fraction: float = 0.2,
) -> tuple[ModelFile, History]:
    """Continue training a saved model on a small labeled table.

    ``overrides`` are TrainConfig fields; learning rate and epochs default to
    1e-4 and 10. Zero epochs returns the loaded model unchanged.
    """
    model_file = ModelFile.load(model_path)
    missing = model_file.missing_features(table.schema.features)
    if missing:
        raise DataError(f"Fine-tuning data lacks the model's features: {', '.join(missing)}")

    settings = {**FINE_TUNE_DEFAULTS, **(overrides or {})}
    unknown = sorted(set(settings) - {f.name for f in fields(TrainConfig)})
    if unknown:
        raise UsageError(f"Unknown fine-tune settings: {', '.join(unknown)}")
    history = History()
    if int(settings["epochs"]) > 0:
        config = TrainConfig(**settings)
        dataset = model_file.encode(table.frame, table.labels)
        train_set, val_set = holdout_split(dataset, val_fraction, config.seed)
        model, history = train(model_file.model, train_set, val_set, config)
        model_file = replace(model_file, model=model)
    if output_path is not None:
        model_file.save(output_path)
    return model_file, history
