"""Experiment-matrix command: the three preset configurations side by side."""

from __future__ import annotations

from pathlib import Path

from itct.commands.common import cli_errors, resolve_config
from itct.errors import UsageError
from itct.metrics.report import EXTENSIONS, FORMATS, MetricsReport, render_matrix
from itct.pipeline import compute_importances, open_cache, train_and_evaluate
from itct.presets import Experiment, get_experiment, list_experiments
from itct.utils.console import (
    console,
    is_quiet,
    print_header,
    print_info,
    print_step,
    print_success,
)
from itct.utils.yaml_config import write_resolved_config

MATRIX_STEM = "experiment_matrix"


def run_experiment_matrix(
    config_file: str | None = None,
    fraction: float | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
    only: list[str] | None = None,
) -> None:
    config = resolve_config(config_file, fraction=fraction, seed=seed, output_dir=output_dir)
    print_header("itct experiment-matrix")
    with cli_errors():
        experiments = _pick(only)
        cache = open_cache(config)
        write_resolved_config(config, config.output_dir)

        needs_importances = any(e.feature_selection for e in experiments)
        if needs_importances and not config.importances_path.is_file():
            print_info("No importance report yet; running feature selection first")
            compute_importances(config, cache)

        reports: list[MetricsReport] = []
        for i, experiment in enumerate(experiments, 1):
            print_step(i, len(experiments), experiment.label)
            run_config = experiment.apply(config)
            out_dir = config.output_dir / "experiments" / experiment.name
            write_resolved_config(run_config, out_dir)
            result, report = train_and_evaluate(run_config, cache, experiment.label, out_dir)
            print_info(
                f"{experiment.name}: accuracy {report.accuracy_pct:.2f}%, "
                f"{len(result.history)} epoch(s), {result.history.stop_reason.value}"
            )
            reports.append(report)

        paths = []
        for fmt in FORMATS:
            path = config.output_dir / f"{MATRIX_STEM}.{EXTENSIONS[fmt]}"
            path.write_text(render_matrix(reports, fmt), encoding="utf-8")
            paths.append(path)

    if not is_quiet():
        console.print(render_matrix(reports, "markdown"), markup=False, highlight=False)
    print_success(f"Comparison written to {', '.join(str(p) for p in paths)}")


def _pick(only: list[str] | None) -> list[Experiment]:
    if not only:
        return list_experiments()
    picked = []
    for name in only:
        experiment = get_experiment(name)
        if experiment is None:
            valid = ", ".join(e.name for e in list_experiments())
            raise UsageError(f"Unknown experiment '{name}'. Available: {valid}")
        picked.append(experiment)
    return picked
