"""Confusion matrix and threshold metrics. The positive class is attack (label 1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from itct.errors import ShapeError

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int
    threshold: float = DEFAULT_THRESHOLD

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def flipped(self) -> ConfusionMatrix:
        """Same predictions scored with normal as the positive class."""
        return ConfusionMatrix(self.tn, self.fn, self.tp, self.fp, self.threshold)

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn,
                "threshold": self.threshold}


@dataclass(frozen=True)
class Ratio:
    """A metric value; ``degenerate`` marks a zero denominator reported as 0."""

    value: float
    degenerate: bool = False


def confusion(
    scores: np.ndarray, labels: np.ndarray, threshold: float = DEFAULT_THRESHOLD
) -> ConfusionMatrix:
    scores = np.asarray(scores)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ShapeError(f"{scores.shape[0]} scores for {labels.shape[0]} labels")
    predicted = scores >= threshold
    actual = labels == 1
    return ConfusionMatrix(
        tp=int(np.sum(predicted & actual)),
        fp=int(np.sum(predicted & ~actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
        threshold=threshold,
    )


def _ratio(num: float, den: float) -> Ratio:
    return Ratio(num / den) if den else Ratio(0.0, degenerate=True)


def accuracy(cm: ConfusionMatrix) -> Ratio:
    return _ratio(cm.tp + cm.tn, cm.total)


def precision(cm: ConfusionMatrix) -> Ratio:
    return _ratio(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> Ratio:
    return _ratio(cm.tp, cm.tp + cm.fn)


def f1(cm: ConfusionMatrix) -> Ratio:
    p, r = precision(cm), recall(cm)
    if p.degenerate or r.degenerate or p.value + r.value == 0:
        return Ratio(0.0, degenerate=True)
    return Ratio(2 * p.value * r.value / (p.value + r.value))


def per_class(cm: ConfusionMatrix) -> dict[str, dict[str, float]]:
    """Precision/recall/F1 with each class taken as positive in turn."""
    out = {}
    for name, matrix in (("attack", cm), ("normal", cm.flipped())):
        out[name] = {
            "precision": precision(matrix).value,
            "recall": recall(matrix).value,
            "f1": f1(matrix).value,
            "support": matrix.tp + matrix.fn,
        }
    return out
