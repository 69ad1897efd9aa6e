"""Area under the ROC curve via the Mann-Whitney rank statistic."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from itct.errors import DataError, ShapeError


def auc_roc(scores: np.ndarray, labels: np.ndarray) -> float:
    """P(score of a random attack row > score of a random normal row), ties count 1/2."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ShapeError(f"{scores.shape[0]} scores for {labels.shape[0]} labels")
    positive = labels == 1
    n_pos = int(positive.sum())
    n_neg = int(positive.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DataError("AUC is undefined when only one class is present")
    ranks = rankdata(scores, method="average")
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
