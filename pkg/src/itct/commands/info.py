"""Info command: experiment presets, hyperparameter defaults and usage."""

from __future__ import annotations

from itct.config import PipelineConfig
from itct.presets import list_experiments
from itct.utils.console import console, create_table

HYPERPARAMETER_KEYS = (
    "learning_rate",
    "weight_decay",
    "dropout_rate",
    "batch_size",
    "epochs",
    "transformer_blocks",
    "attention_heads",
    "embedding_dims",
    "mlp_hidden_units_factors",
)


def run_info() -> None:
    """Display experiment presets and the default hyperparameters."""
    console.print()
    _show_experiments()
    console.print()
    _show_defaults()
    console.print()
    _show_usage()
    console.print()


def _show_experiments() -> None:
    table = create_table(
        "Experiment Presets", ["Name", "Feature selection", "Callback", "Description"]
    )
    for exp in list_experiments():
        table.add_row(
            f"[cyan]{exp.name}[/cyan]",
            "on" if exp.feature_selection else "off",
            "on" if exp.callback else "off",
            exp.description,
        )
    console.print(table)


def _show_defaults() -> None:
    defaults = PipelineConfig().to_dict()
    table = create_table("Hyperparameter Defaults", ["Key", "Value"])
    for key in HYPERPARAMETER_KEYS:
        table.add_row(f"[cyan]{key}[/cyan]", str(defaults[key]))
    console.print(table)


def _show_usage() -> None:
    console.print("[bold]Usage Examples:[/bold]")
    console.print()
    examples = [
        ("itct synth data --config-out run.yaml", "Surrogate captures + config"),
        ("itct preprocess -c run.yaml", "Balance, split and encode"),
        ("itct select-features -c run.yaml", "Forest importances"),
        ("itct train -c run.yaml --fraction 0.02", "Train on a 2% subsample"),
        ("itct evaluate -c run.yaml", "Test-split report"),
        ("itct experiment-matrix -c run.yaml", "All three presets side by side"),
        ("itct predict run/model.itctm new.csv", "Score raw rows"),
    ]
    for cmd, desc in examples:
        console.print(f"  [cyan]{cmd}[/cyan]  {desc}")
