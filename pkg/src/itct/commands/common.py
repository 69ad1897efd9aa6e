"""Helpers shared by the command implementations."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

import typer

from itct.config import PipelineConfig
from itct.errors import ItctError
from itct.utils.console import print_error
from itct.utils.yaml_config import load_config_file


@contextmanager
def cli_errors() -> Iterator[None]:
    """Turn pipeline errors into an error line and the matching exit code."""
    try:
        yield
    except ItctError as e:
        print_error(str(e))
        raise typer.Exit(code=e.exit_code) from None


def resolve_config(
    config_file: str | None,
    *,
    fraction: float | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
) -> PipelineConfig:
    """Load ``--config`` (or defaults) and apply CLI flag overrides."""
    if config_file:
        config = load_config_file(Path(config_file))
        if config is None:
            raise typer.Exit(code=1)
    else:
        config = PipelineConfig()

    overrides: dict = {}
    if fraction is not None:
        overrides["fraction"] = fraction
    if seed is not None:
        overrides["seed"] = seed
    if output_dir is not None:
        overrides["output_dir"] = output_dir
    if not overrides:
        return config
    with cli_errors():
        return replace(config, **overrides)
