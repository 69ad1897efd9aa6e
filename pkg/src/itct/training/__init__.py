"""AdamW training, early stopping, fine-tuning and timing."""

from itct.training.callbacks import EarlyStopping
from itct.training.history import EpochRecord, History, StopReason
from itct.training.loop import evaluate_loss, fine_tune, predict, train
from itct.training.optimizer import AdamW, OptimizerState, adamw_step
from itct.training.timing import Timings, measure

__all__ = [
    "AdamW",
    "EarlyStopping",
    "EpochRecord",
    "History",
    "OptimizerState",
    "StopReason",
    "Timings",
    "adamw_step",
    "evaluate_loss",
    "fine_tune",
    "measure",
    "predict",
    "train",
]
