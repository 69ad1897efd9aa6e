"""Predict command: score raw CSV rows with a saved model."""

from __future__ import annotations

import csv
import io
import json
from contextlib import nullcontext
from pathlib import Path

import numpy as np
import typer

from itct.commands.common import cli_errors
from itct.data.encoded import EncodedDataset, batches
from itct.data.schema import Column, ColumnKind, load_schema
from itct.data.table import load_features_csv
from itct.metrics.classification import DEFAULT_THRESHOLD
from itct.model.serialize import ModelFile
from itct.training.loop import EVAL_BATCH, predict
from itct.utils.console import diagnostics_to_stderr, print_success, print_warning

PREDICTION_COLUMNS = ("row_index", "score", "prediction")
INTROSPECT_ROWS = 256


def run_predict(
    model_path: Path,
    csv_path: Path,
    output: Path | None = None,
    schema_path: Path | None = None,
    introspect: Path | None = None,
) -> None:
    # predictions go to stdout unless --output is given
    routing = diagnostics_to_stderr() if output is None else nullcontext()
    with routing, cli_errors():
        model_file = ModelFile.load(model_path)
        columns = _feature_columns(model_file, schema_path)
        frame, extras = load_features_csv(csv_path, columns)
        if extras:
            print_warning(f"Ignoring columns not used by the model: {', '.join(extras)}")
        dataset = model_file.encode(frame)
        scores = predict(model_file.model, dataset)
        text = predictions_csv(scores)
        if introspect is not None:
            write_introspection(model_file, dataset, introspect)

        if output is None:
            typer.echo(text, nl=False)
        else:
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text(text, encoding="utf-8")
            print_success(f"Scored {len(scores):,} rows -> {output}")


def _feature_columns(model_file: ModelFile, schema_path: Path | None) -> list[Column]:
    """Schema columns for the model's features, keeping CSV header aliases."""
    by_name = {c.name: c for c in load_schema(schema_path).columns}
    columns = []
    for name in model_file.cat_features:
        columns.append(by_name.get(name, Column(name, ColumnKind.CATEGORICAL)))
    for name in model_file.cont_features:
        columns.append(by_name.get(name, Column(name, ColumnKind.CONTINUOUS)))
    return columns


def predictions_csv(scores: np.ndarray, threshold: float = DEFAULT_THRESHOLD) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PREDICTION_COLUMNS)
    for i, score in enumerate(scores):
        writer.writerow([i, f"{float(score):.6f}", int(score >= threshold)])
    return buf.getvalue()


def write_introspection(model_file: ModelFile, dataset: EncodedDataset, path: Path) -> Path:
    """Per-stage tensor shapes and norms for the first rows of the input."""
    stages: dict[str, dict] = {}
    first = next(batches(dataset, min(INTROSPECT_ROWS, EVAL_BATCH)), None)
    if first is not None:
        trace: dict[str, object] = {}
        model_file.model.forward(first, train_mode=False, trace=trace)
        for key, value in trace.items():
            if isinstance(value, list):
                for i, item in enumerate(value):
                    stages[f"{key}.{i}"] = _describe(item)
            else:
                stages[key] = _describe(value)
    payload = {
        "rows": 0 if first is None else int(first.labels.shape[0]),
        "features": model_file.features,
        "parameters": model_file.model.param_breakdown(),
        "stages": stages,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def _describe(tensor: np.ndarray) -> dict:
    values = np.asarray(tensor, dtype=np.float64)
    return {
        "shape": list(values.shape),
        "l2_norm": float(np.linalg.norm(values)),
        "mean_abs": float(np.mean(np.abs(values))) if values.size else 0.0,
    }
