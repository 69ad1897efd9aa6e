"""Binary cross-entropy on sigmoid outputs."""

from __future__ import annotations

import numpy as np

from itct.errors import ShapeError

PROB_CLAMP = 1e-7


def _check(probs: np.ndarray, labels: np.ndarray) -> None:
    if probs.shape[0] != labels.shape[0]:
        raise ShapeError(f"loss: {probs.shape[0]} probabilities for {labels.shape[0]} labels")


def binary_cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean of -(y ln p + (1 - y) ln(1 - p)) with p clamped to [1e-7, 1 - 1e-7]."""
    _check(probs, labels)
    if probs.size == 0:
        return 0.0
    p = np.clip(probs.astype(np.float64), PROB_CLAMP, 1.0 - PROB_CLAMP)
    y = labels.astype(np.float64)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def bce_logit_grad(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """d(mean BCE)/d(logit) = (p - y) / n.

    The clamp only guards the logarithm; saturated wrong predictions keep their gradient.
    """
    _check(probs, labels)
    p = probs.astype(np.float64)
    return (p - labels.astype(np.float64)) / max(p.size, 1)
