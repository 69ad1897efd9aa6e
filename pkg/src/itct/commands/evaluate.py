"""Evaluate command: model file + cached test split -> report.{md,csv,json}."""

from __future__ import annotations

import json
import math
from pathlib import Path

from itct.commands.common import cli_errors, resolve_config
from itct.metrics.report import render, write_report
from itct.model.serialize import ModelFile
from itct.pipeline import evaluate_model, open_cache
from itct.utils.console import console, is_quiet, print_header, print_success, print_verbose
from itct.utils.yaml_config import write_resolved_config


def run_evaluate(
    config_file: str | None = None,
    fraction: float | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
    model_path: Path | None = None,
    label: str = "itct",
) -> None:
    config = resolve_config(config_file, fraction=fraction, seed=seed, output_dir=output_dir)
    print_header("itct evaluate")
    with cli_errors():
        path = model_path or config.model_path
        model_file = ModelFile.load(path)
        cache = open_cache(config)
        training_seconds, val_loss = _training_summary(path.parent / "history.json")
        report = evaluate_model(
            model_file, cache, label, training_seconds=training_seconds, val_loss=val_loss
        )
        write_resolved_config(config, config.output_dir)
        paths = write_report(report, config.output_dir)

    if not is_quiet():
        console.print(render(report, "markdown"), markup=False, highlight=False)
    print_success(f"Report written to {', '.join(str(p) for p in paths)}")


def _training_summary(history_path: Path) -> tuple[float, float]:
    """Training seconds and final validation loss from a saved history, if any."""
    if not history_path.is_file():
        print_verbose(f"No history at {history_path}; training time reported as 0")
        return 0.0, math.nan
    try:
        data = json.loads(history_path.read_text(encoding="utf-8"))
        return float(data["total_seconds"]), float(data["final_val_loss"])
    except (ValueError, KeyError, TypeError):
        print_verbose(f"Unreadable history at {history_path}; ignoring it")
        return 0.0, math.nan
