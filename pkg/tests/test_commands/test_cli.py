"""Tests for CLI commands via typer.testing.CliRunner."""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import yaml
from click.testing import Result
from typer.testing import CliRunner

from itct.cli import app
from itct.commands.predict import PREDICTION_COLUMNS
from itct.data.schema import default_schema
from itct.featsel.selection import ImportanceReport
from itct.model.serialize import ModelFile, file_digest

runner = CliRunner()


def _invoke(*args: str | Path) -> Result:
    return runner.invoke(app, [str(a) for a in args])


def _prepared(run_config: Path) -> Path:
    """Output directory after preprocess and select-features."""
    assert _invoke("preprocess", "-c", run_config).exit_code == 0
    assert _invoke("select-features", "-c", run_config).exit_code == 0
    return run_config.parent / "run"


def _trained(run_config: Path) -> Path:
    out = _prepared(run_config)
    result = _invoke("train", "-c", run_config)
    assert result.exit_code == 0, result.output
    return out


def test_version_command() -> None:
    result = _invoke("version")
    assert result.exit_code == 0
    assert "itct" in result.output


def test_info_command() -> None:
    result = _invoke("info")
    assert result.exit_code == 0
    assert "experiment-1" in result.output
    assert "embedding_dims" in result.output


def test_no_args_shows_help() -> None:
    result = runner.invoke(app, [])
    # no_args_is_help=True causes exit code 0 or 2 depending on Typer version
    assert result.exit_code in (0, 2)
    assert "Usage" in result.output or "itct" in result.output


def test_bad_config_key(tmp_path: Path) -> None:
    path = tmp_path / "bad.yaml"
    path.write_text("learning_rte: 0.1\n")
    result = _invoke("preprocess", "-c", path)
    assert result.exit_code == 1
    assert "Unknown config keys" in result.output


def test_fraction_out_of_range(run_config: Path) -> None:
    result = _invoke("train", "-c", run_config, "--fraction", "0")
    assert result.exit_code == 1
    assert "fraction" in result.output


def test_train_without_cache(run_config: Path) -> None:
    result = _invoke("train", "-c", run_config)
    assert result.exit_code == 2
    assert "itct preprocess" in result.output


def test_preprocess_writes_cache(run_config: Path) -> None:
    result = _invoke("preprocess", "-c", run_config)
    assert result.exit_code == 0, result.output
    out = run_config.parent / "run"
    assert (out / "cache").is_dir()
    resolved = yaml.safe_load((out / "resolved_config.yaml").read_text())
    assert resolved["seed"] == 3
    assert "Splits" in result.output


def test_select_features_writes_importances(run_config: Path) -> None:
    out = _prepared(run_config)
    report = ImportanceReport.load(out / "importances.json")
    assert "protocol" in report.features
    assert set(report.importances) == set(default_schema().features)


def test_train_and_evaluate(run_config: Path) -> None:
    out = _trained(run_config)
    assert (out / "model.itctm").is_file()
    history = json.loads((out / "history.json").read_text())
    assert 1 <= len(history["epochs"]) <= 2

    result = _invoke("evaluate", "-c", run_config, "--label", "surrogate")
    assert result.exit_code == 0, result.output
    assert "| Metrics | surrogate |" in result.output
    report = json.loads((out / "report.json").read_text())
    assert report["label"] == "surrogate"
    assert report["total_weights"] == ModelFile.load(out / "model.itctm").model.count_params()
    assert (out / "report.md").is_file() and (out / "report.csv").is_file()


def test_training_is_reproducible(run_config: Path) -> None:
    out = _trained(run_config)
    first = file_digest(out / "model.itctm")
    assert _invoke("train", "-c", run_config).exit_code == 0
    assert file_digest(out / "model.itctm") == first


def test_evaluate_missing_model(run_config: Path, tmp_path: Path) -> None:
    _prepared(run_config)
    result = _invoke("evaluate", "-c", run_config, "--model", tmp_path / "nope.itctm")
    assert result.exit_code == 2
    assert "not found" in result.output


def _model_features_csv(model_path: Path, source: Path, target: Path) -> Path:
    headers = {c.name: c.header for c in default_schema().columns}
    wanted = [headers[f] for f in ModelFile.load(model_path).features]
    pd.read_csv(source, dtype=str)[wanted].to_csv(target, index=False)
    return target


def test_predict_to_stdout(run_config: Path, surrogate_files: list[Path], tmp_path: Path) -> None:
    out = _trained(run_config)
    csv_path = _model_features_csv(out / "model.itctm", surrogate_files[0], tmp_path / "in.csv")
    result = _invoke("-q", "predict", out / "model.itctm", csv_path)
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == ",".join(PREDICTION_COLUMNS)
    assert len(lines) == 1 + len(pd.read_csv(csv_path))
    index, score, prediction = lines[1].split(",")
    assert index == "0"
    assert 0.0 < float(score) < 1.0
    assert prediction == str(int(float(score) >= 0.5))


def test_predict_to_file_with_extra_columns(
    run_config: Path, surrogate_files: list[Path], tmp_path: Path
) -> None:
    out = _trained(run_config)
    target = tmp_path / "scores.csv"
    trace = tmp_path / "trace.json"
    result = _invoke(
        "predict", out / "model.itctm", surrogate_files[4], "-o", target, "--introspect", trace
    )
    assert result.exit_code == 0, result.output
    assert "Ignoring columns" in result.output
    scores = pd.read_csv(target)
    assert list(scores.columns) == list(PREDICTION_COLUMNS)
    assert len(scores) == len(pd.read_csv(surrogate_files[4]))

    stages = json.loads(trace.read_text())["stages"]
    assert stages["fusion"]["shape"][0] == min(256, len(scores))
    assert "blocks.0" in stages


def test_predict_header_only(run_config: Path, surrogate_files: list[Path], tmp_path: Path) -> None:
    out = _trained(run_config)
    full = _model_features_csv(out / "model.itctm", surrogate_files[0], tmp_path / "full.csv")
    header = full.read_text().splitlines()[0]
    empty = tmp_path / "empty.csv"
    empty.write_text(header + "\n")
    result = _invoke("-q", "predict", out / "model.itctm", empty)
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == [",".join(PREDICTION_COLUMNS)]


def test_fine_tune(run_config: Path, surrogate_files: list[Path], tmp_path: Path) -> None:
    out = _trained(run_config)
    tuned = tmp_path / "tuned" / "model.itctm"
    result = _invoke(
        "fine-tune", out / "model.itctm", *surrogate_files[3:], "-o", tuned, "--epochs", "1"
    )
    assert result.exit_code == 0, result.output
    assert ModelFile.load(tuned).features == ModelFile.load(out / "model.itctm").features
    assert (tuned.parent / "model.history.json").is_file()

    copy = tmp_path / "copy.itctm"
    assert _invoke(
        "fine-tune", out / "model.itctm", surrogate_files[0], "-o", copy, "--epochs", "0"
    ).exit_code == 0
    assert file_digest(copy) == file_digest(out / "model.itctm")


def test_fine_tune_on_model_columns_only(
    run_config: Path, surrogate_files: list[Path], tmp_path: Path
) -> None:
    out = _trained(run_config)
    model_path = out / "model.itctm"
    headers = {c.name: c.header for c in default_schema().columns}
    wanted = [headers[f] for f in ModelFile.load(model_path).features]
    wanted.append(headers[default_schema().label])
    narrow = tmp_path / "narrow.csv"
    pd.read_csv(surrogate_files[0], dtype=str)[wanted].to_csv(narrow, index=False)

    tuned = tmp_path / "narrow.itctm"
    result = _invoke("fine-tune", model_path, narrow, "-o", tuned, "--epochs", "1")
    assert result.exit_code == 0, result.output
    assert tuned.is_file()


def test_synth_with_config(tmp_path: Path) -> None:
    config = tmp_path / "synth.yaml"
    result = _invoke("synth", tmp_path / "data", "-n", "120", "--config-out", config)
    assert result.exit_code == 0, result.output
    data = yaml.safe_load(config.read_text())
    assert [Path(p).name for p in data["dataset_files"]] == [
        "scan_A.csv", "scan_sU.csv", "sparta.csv", "mqtt_bruteforce.csv", "normal.csv",
    ]
    assert _invoke("preprocess", "-c", config).exit_code == 0
    assert (tmp_path / "data" / "run" / "cache").is_dir()


def test_experiment_matrix(run_config: Path) -> None:
    out = run_config.parent / "run"
    assert _invoke("preprocess", "-c", run_config).exit_code == 0
    result = _invoke("experiment-matrix", "-c", run_config, "--fraction", "0.5")
    assert result.exit_code == 0, result.output
    for name in ("experiment-1", "experiment-2", "experiment-3"):
        assert (out / "experiments" / name / "model.itctm").is_file()
        assert (out / "experiments" / name / "report.json").is_file()
    # importances are computed on demand for experiment 1
    assert (out / "importances.json").is_file()
    header = (out / "experiment_matrix.md").read_text().splitlines()[0]
    assert header.count("Experiment") == 3
    assert len(json.loads((out / "experiment_matrix.json").read_text())) == 3


def test_experiment_matrix_unknown_name(run_config: Path) -> None:
    assert _invoke("preprocess", "-c", run_config).exit_code == 0
    result = _invoke("experiment-matrix", "-c", run_config, "--only", "experiment-9")
    assert result.exit_code == 1
    assert "experiment-2" in result.output
