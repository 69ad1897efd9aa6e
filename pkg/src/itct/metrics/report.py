"""Results-table style reports in markdown, CSV and JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from itct.errors import UsageError
from itct.metrics.classification import (
    ConfusionMatrix,
    accuracy,
    f1,
    per_class,
    precision,
    recall,
)
from itct.training.timing import Timings

FORMATS = ("markdown", "csv", "json")
EXTENSIONS = {"markdown": "md", "csv": "csv", "json": "json"}

# (row label, report attribute, format spec)
ROWS: tuple[tuple[str, str, str], ...] = (
    ("Accuracy(%)", "accuracy_pct", ".2f"),
    ("Precision", "precision", ".4f"),
    ("Recall", "recall", ".4f"),
    ("F1-Score", "f1", ".4f"),
    ("AUC ROC Score", "auc_roc", ".4f"),
    ("Training Time (seconds)", "training_seconds", ".2f"),
    ("Inference Time (seconds)", "inference_seconds", ".2f"),
    ("Total Model Weights", "total_weights", "d"),
    ("Loss", "val_loss", ".4f"),
)


@dataclass(frozen=True)
class MetricsReport:
    label: str
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc_roc: float
    confusion: ConfusionMatrix
    training_seconds: float
    inference_seconds: float
    total_weights: int
    val_loss: float = math.nan
    degenerate: tuple[str, ...] = ()
    per_class: dict[str, dict[str, float]] = field(default_factory=dict)
    features: tuple[str, ...] = ()

    @property
    def accuracy_pct(self) -> float:
        return self.accuracy * 100.0

    def formatted(self) -> list[tuple[str, str]]:
        """(row label, text) pairs shared by every output format."""
        return [(label, _fmt(getattr(self, attr), spec)) for label, attr, spec in ROWS]

    def without_timings(self) -> MetricsReport:
        return replace(self, training_seconds=0.0, inference_seconds=0.0)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["confusion"] = self.confusion.to_dict()
        data["degenerate"] = list(self.degenerate)
        data["features"] = list(self.features)
        data["table"] = {label: _number(text) for label, text in self.formatted()}
        if math.isnan(self.val_loss):
            data["val_loss"] = None
        return data


def build_report(
    cm: ConfusionMatrix,
    auc: float,
    timings: Timings,
    weights: int,
    label: str,
    *,
    val_loss: float = math.nan,
    features: list[str] | tuple[str, ...] = (),
) -> MetricsReport:
    ratios = {
        "accuracy": accuracy(cm),
        "precision": precision(cm),
        "recall": recall(cm),
        "f1": f1(cm),
    }
    return MetricsReport(
        label=label,
        accuracy=ratios["accuracy"].value,
        precision=ratios["precision"].value,
        recall=ratios["recall"].value,
        f1=ratios["f1"].value,
        auc_roc=auc,
        confusion=cm,
        training_seconds=timings.get("training"),
        inference_seconds=timings.get("inference"),
        total_weights=weights,
        val_loss=val_loss,
        degenerate=tuple(name for name, r in ratios.items() if r.degenerate),
        per_class=per_class(cm),
        features=tuple(features),
    )


def render(report: MetricsReport, fmt: str) -> str:
    return render_matrix([report], fmt)


def render_matrix(reports: list[MetricsReport], fmt: str) -> str:
    """One column per report, rows in results-table order."""
    if fmt not in FORMATS:
        raise UsageError(f"Unknown report format '{fmt}'. Supported: {', '.join(FORMATS)}")
    if not reports:
        raise UsageError("Nothing to render")
    labels = [r.label for r in reports]
    columns = [dict(r.formatted()) for r in reports]
    row_labels = [label for label, _, _ in ROWS]

    if fmt == "json":
        payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["Metrics", *labels])
        for row in row_labels:
            writer.writerow([row, *(c[row] for c in columns)])
        return buf.getvalue()

    lines = [
        "| Metrics | " + " | ".join(labels) + " |",
        "|---|" + "---|" * len(labels),
    ]
    for row in row_labels:
        lines.append(f"| {row} | " + " | ".join(c[row] for c in columns) + " |")
    return "\n".join(lines) + "\n"


def write_report(report: MetricsReport, directory: Path, stem: str = "report") -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for fmt in FORMATS:
        path = directory / f"{stem}.{EXTENSIONS[fmt]}"
        path.write_text(render(report, fmt), encoding="utf-8")
        paths.append(path)
    return paths


def _fmt(value: float, spec: str) -> str:
    if spec == "d":
        return str(int(value))
    if value is None or math.isnan(value):
        return "n/a"
    return format(value, spec)


def _number(text: str) -> float | int | None:
    if text == "n/a":
        return None
    return int(text) if text.lstrip("-").isdigit() else float(text)
