"""Typer CLI app for itct."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer

app = typer.Typer(
    name="itct",
    help="Transformer classifier for IoT/MQTT traffic: preprocess, select, train, evaluate.",
    no_args_is_help=True,
    rich_markup_mode="rich",
)

ConfigOption = Annotated[
    str | None,
    typer.Option("--config", "-c", help="Path to YAML config file"),
]
FractionOption = Annotated[
    float | None,
    typer.Option("--fraction", help="Stratified, seeded share of the cache to use (0, 1]"),
]
SeedOption = Annotated[
    int | None,
    typer.Option("--seed", help="Seed for splits, sampling, initialization and shuffling"),
]
OutputOption = Annotated[
    Path | None,
    typer.Option("--output", "-o", help="Output directory (default: from config)"),
]
SchemaOption = Annotated[
    Path | None,
    typer.Option("--schema", help="Column schema file (default: shipped MQTT schema)"),
]


@app.callback()
def main(
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Enable verbose output"),
    ] = False,
    quiet: Annotated[
        bool,
        typer.Option("--quiet", "-q", help="Suppress non-essential output"),
    ] = False,
) -> None:
    """Transformer classifier for IoT/MQTT traffic."""
    if verbose:
        from itct.utils.console import set_verbose

        set_verbose(True)
    if quiet:
        from itct.utils.console import set_quiet

        set_quiet(True)


@app.command()
def preprocess(
    config: ConfigOption = None,
    seed: SeedOption = None,
    output_dir: OutputOption = None,
) -> None:
    """Load, impute, balance, split and encode the five capture files."""
    from itct.commands.preprocess import run_preprocess

    run_preprocess(config_file=config, seed=seed, output_dir=output_dir)


@app.command("select-features")
def select_features(
    config: ConfigOption = None,
    fraction: FractionOption = None,
    seed: SeedOption = None,
    output_dir: OutputOption = None,
    threshold: Annotated[
        str | None,
        typer.Option("--threshold", "-t", help="Importance threshold: 'mean' or a number"),
    ] = None,
    n_trees: Annotated[
        int | None,
        typer.Option("--n-trees", help="Number of trees in the forest", min=1),
    ] = None,
) -> None:
    """Rank features with a random forest and write importances.json."""
    from itct.commands.select_features import run_select_features

    run_select_features(
        config_file=config,
        fraction=fraction,
        seed=seed,
        output_dir=output_dir,
        threshold=threshold,
        n_trees=n_trees,
    )


@app.command()
def train(
    config: ConfigOption = None,
    fraction: FractionOption = None,
    seed: SeedOption = None,
    output_dir: OutputOption = None,
    epochs: Annotated[
        int | None,
        typer.Option("--epochs", "-e", help="Override the epoch budget", min=1),
    ] = None,
) -> None:
    """Train the transformer and write the model file and history."""
    from itct.commands.train import run_train

    run_train(
        config_file=config,
        fraction=fraction,
        seed=seed,
        output_dir=output_dir,
        epochs=epochs,
    )


@app.command()
def evaluate(
    config: ConfigOption = None,
    fraction: FractionOption = None,
    seed: SeedOption = None,
    output_dir: OutputOption = None,
    model: Annotated[
        Path | None,
        typer.Option("--model", "-m", help="Model file (default: <output>/model.itctm)"),
    ] = None,
    label: Annotated[
        str,
        typer.Option("--label", help="Column label in the report"),
    ] = "itct",
) -> None:
    """Score the test split and write report.{md,csv,json}."""
    from itct.commands.evaluate import run_evaluate

    run_evaluate(
        config_file=config,
        fraction=fraction,
        seed=seed,
        output_dir=output_dir,
        model_path=model,
        label=label,
    )


@app.command("experiment-matrix")
def experiment_matrix(
    config: ConfigOption = None,
    fraction: FractionOption = None,
    seed: SeedOption = None,
    output_dir: OutputOption = None,
    only: Annotated[
        list[str] | None,
        typer.Option("--only", help="Run only the named experiment (repeatable)"),
    ] = None,
) -> None:
    """Train and evaluate every experiment preset and compare them."""
    from itct.commands.experiment import run_experiment_matrix

    run_experiment_matrix(
        config_file=config,
        fraction=fraction,
        seed=seed,
        output_dir=output_dir,
        only=only,
    )


@app.command()
def predict(
    model: Annotated[Path, typer.Argument(help="Model file")],
    csv_path: Annotated[Path, typer.Argument(help="CSV with the model's feature columns")],
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Write scores here instead of stdout"),
    ] = None,
    schema: SchemaOption = None,
    introspect: Annotated[
        Path | None,
        typer.Option("--introspect", help="Write per-stage tensor shapes and norms as JSON"),
    ] = None,
) -> None:
    """Emit row_index,score,prediction for every input row."""
    from itct.commands.predict import run_predict

    run_predict(
        model_path=model,
        csv_path=csv_path,
        output=output,
        schema_path=schema,
        introspect=introspect,
    )


@app.command("fine-tune")
def fine_tune(
    model: Annotated[Path, typer.Argument(help="Model file to start from")],
    csv_paths: Annotated[list[Path], typer.Argument(help="Labeled capture CSVs")],
    output: Annotated[
        Path,
        typer.Option("--output", "-o", help="Where to write the fine-tuned model"),
    ],
    schema: SchemaOption = None,
    epochs: Annotated[
        int | None,
        typer.Option("--epochs", "-e", help="Epochs (default 10; 0 copies the model)", min=0),
    ] = None,
    learning_rate: Annotated[
        float | None,
        typer.Option("--learning-rate", "--lr", help="Learning rate (default 1e-4)"),
    ] = None,
    seed: SeedOption = None,
) -> None:
    """Continue training a saved model on new labeled traffic."""
    from itct.commands.finetune import run_fine_tune

    run_fine_tune(
        model_path=model,
        csv_paths=csv_paths,
        output=output,
        schema_path=schema,
        epochs=epochs,
        learning_rate=learning_rate,
        seed=seed,
    )


@app.command()
def synth(
    directory: Annotated[Path, typer.Argument(help="Directory for the five CSV files")],
    rows: Annotated[
        int,
        typer.Option("--rows", "-n", help="Rows per file", min=10),
    ] = 2000,
    seed: Annotated[int, typer.Option("--seed", help="Generator seed")] = 42,
    schema: SchemaOption = None,
    config_out: Annotated[
        Path | None,
        typer.Option("--config-out", help="Also write a YAML config listing the files"),
    ] = None,
) -> None:
    """Write synthetic stand-ins for the five capture files."""
    from itct.commands.synth import run_synth

    run_synth(
        directory=directory,
        rows=rows,
        seed=seed,
        schema_path=schema,
        config_out=config_out,
    )


@app.command()
def info() -> None:
    """Show experiment presets and hyperparameter defaults."""
    from itct.commands.info import run_info

    run_info()


@app.command()
def version() -> None:
    """Show version."""
    from itct.commands.version import run_version

    run_version()
