"""Select-features command: forest importances -> importances.json."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from itct.commands.common import cli_errors, resolve_config
from itct.featsel.selection import ImportanceReport
from itct.pipeline import compute_importances, open_cache
from itct.utils.console import create_table, print_header, print_info, print_success, print_table
from itct.utils.yaml_config import write_resolved_config


def run_select_features(
    config_file: str | None = None,
    fraction: float | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
    threshold: str | None = None,
    n_trees: int | None = None,
) -> None:
    config = resolve_config(config_file, fraction=fraction, seed=seed, output_dir=output_dir)
    print_header("itct select-features")
    with cli_errors():
        if threshold is not None:
            config = replace(config, selection_threshold=threshold)
        if n_trees is not None:
            config = replace(config, n_trees=n_trees)
        cache = open_cache(config)
        print_info(
            f"Fitting {config.n_trees} trees on up to {config.selection_cap:,} of "
            f"{len(cache.train):,} training rows"
        )
        report = compute_importances(config, cache)
        write_resolved_config(config, config.output_dir)
    _show_report(report)
    print_success(f"Importances written to {config.importances_path}")


def _show_report(report: ImportanceReport) -> None:
    table = create_table(
        f"Feature importances (threshold {report.threshold:.4f})",
        ["Feature", "Importance", "Selected"],
    )
    chosen = set(report.selected)
    forced = set(report.forced_included)
    ranked = sorted(report.importances.items(), key=lambda kv: -kv[1])
    for name, value in ranked:
        if name in chosen:
            mark = "[green]yes[/green]"
        elif name in forced:
            mark = "[yellow]forced[/yellow]"
        else:
            mark = ""
        table.add_row(name, f"{value:.4f}", mark)
    print_table(table)
    print_info(f"Model input features: {', '.join(report.features)}")
