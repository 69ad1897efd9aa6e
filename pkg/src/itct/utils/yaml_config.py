"""YAML config file parser for ``itct <command> --config``."""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path

import yaml

from itct.config import RESOLVED_CONFIG_FILENAME, PipelineConfig
from itct.errors import UsageError
from itct.utils.console import print_error

CONFIG_KEYS = frozenset(f.name for f in fields(PipelineConfig))


def load_config_file(config_path: Path) -> PipelineConfig | None:
    """Parse a YAML config file into a PipelineConfig.

    Keys mirror the hyperparameter names (learning_rate, batch_size, ...) plus
    the pipeline keys. Relative paths are resolved against the config file's
    directory.
    """
    if not config_path.exists():
        print_error(f"Config file not found: {config_path}")
        return None

    try:
        data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        print_error(f"Invalid YAML: {e}")
        return None

    if data is None:
        data = {}
    if not isinstance(data, dict):
        print_error("Config file must be a YAML mapping")
        return None

    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        print_error(f"Unknown config keys: {', '.join(unknown)}")
        print_error(f"Valid keys: {', '.join(sorted(CONFIG_KEYS))}")
        return None

    base = config_path.parent
    if "dataset_files" in data:
        files = data["dataset_files"]
        if not isinstance(files, list):
            print_error("'dataset_files' must be a list of paths")
            return None
        data["dataset_files"] = [_resolve(base, f) for f in files]
    for key in ("schema", "output_dir"):
        if data.get(key) is not None:
            data[key] = _resolve(base, data[key])
    if "force_include" in data and not isinstance(data["force_include"], list):
        print_error("'force_include' must be a list of feature names")
        return None

    try:
        return PipelineConfig(**data)
    except (UsageError, TypeError, ValueError) as e:
        print_error(f"Invalid config: {e}")
        return None


def _resolve(base: Path, value: str | Path) -> Path:
    path = Path(value).expanduser()
    return path if path.is_absolute() else base / path


def write_resolved_config(config: PipelineConfig, directory: Path) -> Path:
    """Echo the fully resolved configuration beside a command's outputs."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / RESOLVED_CONFIG_FILENAME
    path.write_text(
        yaml.safe_dump(config.to_dict(), sort_keys=True, default_flow_style=False),
        encoding="utf-8",
    )
    return path
