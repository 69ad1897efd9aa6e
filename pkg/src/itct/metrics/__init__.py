"""Classification metrics, AUC-ROC and report rendering."""

from itct.metrics.auc import auc_roc
from itct.metrics.classification import (
    ConfusionMatrix,
    accuracy,
    confusion,
    f1,
    per_class,
    precision,
    recall,
)
from itct.metrics.report import MetricsReport, build_report, render, render_matrix

__all__ = [
    "ConfusionMatrix",
    "MetricsReport",
    "accuracy",
    "auc_roc",
    "build_report",
    "confusion",
    "f1",
    "per_class",
    "precision",
    "recall",
    "render",
    "render_matrix",
]
