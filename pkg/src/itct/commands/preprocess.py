"""Preprocess command: five capture CSVs -> encoded dataset cache."""

from __future__ import annotations

from pathlib import Path

from itct.commands.common import cli_errors, resolve_config
from itct.data.cache import DatasetCache
from itct.pipeline import build_cache
from itct.utils.console import (
    create_table,
    print_header,
    print_info,
    print_success,
    print_table,
)
from itct.utils.yaml_config import write_resolved_config


def run_preprocess(
    config_file: str | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
) -> None:
    config = resolve_config(config_file, seed=seed, output_dir=output_dir)
    print_header("itct preprocess")
    with cli_errors():
        cache = build_cache(config, on_step=print_info)
        write_resolved_config(config, config.output_dir)
    _show_summary(cache)
    print_success(f"Cache written to {config.cache_dir}")


def _show_summary(cache: DatasetCache) -> None:
    files = create_table(
        "Per-file class counts",
        ["File", "Loaded normal", "Loaded attack", "Balanced normal", "Balanced attack"],
    )
    for name, info in cache.summary["files"].items():
        files.add_row(
            f"[cyan]{name}[/cyan]",
            f"{info['loaded']['normal']:,}",
            f"{info['loaded']['attack']:,}",
            f"{info['balanced']['normal']:,}",
            f"{info['balanced']['attack']:,}",
        )
    print_table(files)

    splits = create_table("Splits", ["Split", "Normal", "Attack", "Total"])
    for name, counts in cache.summary["splits"].items():
        splits.add_row(
            name,
            f"{counts['normal']:,}",
            f"{counts['attack']:,}",
            f"{counts['normal'] + counts['attack']:,}",
        )
    print_table(splits)
