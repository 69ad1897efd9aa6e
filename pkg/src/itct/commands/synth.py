"""Synth command: write surrogate capture files and a config pointing at them."""

from __future__ import annotations

from pathlib import Path

import yaml

from itct.commands.common import cli_errors
from itct.data.schema import load_schema
from itct.data.synth import make_surrogate_files
from itct.utils.console import create_table, print_header, print_success, print_table


def run_synth(
    directory: Path,
    rows: int = 2000,
    seed: int = 42,
    schema_path: Path | None = None,
    config_out: Path | None = None,
) -> None:
    print_header("itct synth")
    with cli_errors():
        paths = make_surrogate_files(directory, rows, seed, schema=load_schema(schema_path))

    table = create_table("Surrogate capture files", ["File", "Bytes"])
    for path in paths:
        table.add_row(f"[cyan]{path.name}[/cyan]", f"{path.stat().st_size:,}")
    print_table(table)

    if config_out is not None:
        data: dict = {
            "dataset_files": [str(p.resolve()) for p in paths],
            "output_dir": str((directory / "run").resolve()),
            "seed": seed,
        }
        if schema_path is not None:
            data["schema"] = str(schema_path.resolve())
        config_out.parent.mkdir(parents=True, exist_ok=True)
        config_out.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        print_success(f"Config written to {config_out}")
    print_success(f"{len(paths)} files written to {directory}")
