"""Early stopping on validation loss with best-weights restoration."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from itct.errors import UsageError


class EarlyStopping:
    """Stop once validation loss has not improved for ``patience`` consecutive epochs."""

    def __init__(self, patience: int = 3, min_delta: float = 0.0) -> None:
        if patience < 1:
            raise UsageError("patience must be >= 1")
        self.patience = patience
        self.min_delta = min_delta
        self.best_loss = math.inf
        self.best_epoch: int | None = None
        self.best_state: dict[str, np.ndarray] | None = None
        self.wait = 0

    def update(
        self, epoch: int, val_loss: float, snapshot: Callable[[], dict[str, np.ndarray]]
    ) -> bool:
        """Record one epoch; returns True when training should stop."""
        if val_loss < self.best_loss - self.min_delta:
            self.best_loss = val_loss
            self.best_epoch = epoch
            self.best_state = snapshot()
            self.wait = 0
            return False
        self.wait += 1
        return self.wait >= self.patience
