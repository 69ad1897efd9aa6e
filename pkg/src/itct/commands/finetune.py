"""Fine-tune command: continue training a saved model on new labeled captures."""

from __future__ import annotations

from pathlib import Path

from itct.commands.common import cli_errors
from itct.data.schema import Schema, load_schema
from itct.data.table import DatasetTable, concat_tables, load_features_csv
from itct.model.serialize import ModelFile
from itct.training.loop import FINE_TUNE_DEFAULTS, fine_tune
from itct.utils.console import print_header, print_info, print_success, print_warning


def run_fine_tune(
    model_path: Path,
    csv_paths: list[Path],
    output: Path,
    schema_path: Path | None = None,
    epochs: int | None = None,
    learning_rate: float | None = None,
    seed: int | None = None,
) -> None:
    print_header("itct fine-tune")
    overrides: dict = {}
    if epochs is not None:
        overrides["epochs"] = epochs
    if learning_rate is not None:
        overrides["learning_rate"] = learning_rate
    if seed is not None:
        overrides["seed"] = seed
    settings = {**FINE_TUNE_DEFAULTS, **overrides}

    with cli_errors():
        schema = _model_schema(ModelFile.load(model_path), load_schema(schema_path))
        table = concat_tables([load_labeled_csv(p, schema) for p in csv_paths])
        counts = table.class_counts()
        print_info(
            f"Fine-tuning on {len(table):,} rows ({counts.normal:,} normal, "
            f"{counts.attack:,} attack), lr {settings['learning_rate']}, "
            f"{settings['epochs']} epoch(s)"
        )
        _, history = fine_tune(model_path, table, overrides, output)
        if len(history):
            history.save(output.parent, stem=f"{output.stem}.history")

    if len(history):
        print_info(f"Final validation loss {history.final_val_loss:.4f}")
    print_success(f"Fine-tuned model written to {output}")


def _model_schema(model_file: ModelFile, schema: Schema) -> Schema:
    """The schema cut down to the model's features and the label."""
    model_file.check_features(schema.features)
    return schema.subset(model_file.features)


def load_labeled_csv(path: Path, schema: Schema) -> DatasetTable:
    """Feature and label columns of one CSV; columns outside ``schema`` are skipped."""
    frame, extras = load_features_csv(path, schema.loaded)
    if extras:
        print_warning(f"{path.name}: ignoring columns not used by the model: {', '.join(extras)}")
    return DatasetTable(schema, frame)
