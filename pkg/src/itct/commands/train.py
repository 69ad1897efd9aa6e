"""Train command: cache (+ importances) -> model file and history."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from itct.commands.common import cli_errors, resolve_config
from itct.pipeline import model_features, open_cache, train_model
from itct.training.history import EpochRecord
from itct.utils.console import create_progress, print_header, print_info, print_success
from itct.utils.yaml_config import write_resolved_config


def run_train(
    config_file: str | None = None,
    fraction: float | None = None,
    seed: int | None = None,
    output_dir: Path | None = None,
    epochs: int | None = None,
) -> None:
    config = resolve_config(config_file, fraction=fraction, seed=seed, output_dir=output_dir)
    print_header("itct train")
    with cli_errors():
        if epochs is not None:
            config = replace(config, epochs=epochs)
        cache = open_cache(config)
        features = model_features(config, cache)
        print_info(f"Input features ({len(features)}): {', '.join(features)}")
        print_info(
            f"Training on {len(cache.train):,} rows, validating on {len(cache.val):,} "
            f"(early stopping {'on' if config.callback else 'off'})"
        )
        write_resolved_config(config, config.output_dir)
        with create_progress() as progress:
            task = progress.add_task("Training", total=config.epochs)

            def advance(record: EpochRecord) -> None:
                progress.update(
                    task, advance=1, description=f"Epoch {record.epoch} val {record.val_loss:.4f}"
                )

            result = train_model(config, cache, features, on_epoch=advance)
        result.model_file.save(config.model_path)
        result.history.save(config.output_dir)

    history = result.history
    print_info(
        f"{len(history)} epoch(s), {history.stop_reason.value}, "
        f"final val loss {history.final_val_loss:.4f}, {result.seconds:.2f}s, "
        f"{result.model_file.model.count_params():,} weights"
    )
    print_success(f"Model written to {config.model_path}")
