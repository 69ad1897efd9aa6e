"""Per-epoch training history."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

from itct.errors import UsageError


class StopReason(str, Enum):
    COMPLETED = "completed"
    EARLY_STOPPED = "early_stopped"


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_acc: float
    seconds: float


CSV_COLUMNS = ("epoch", "train_loss", "val_loss", "val_acc", "seconds")


@dataclass
class History:
    records: list[EpochRecord] = field(default_factory=list)
    stop_reason: StopReason = StopReason.COMPLETED
    best_epoch: int | None = None

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: EpochRecord) -> None:
        if self.records and record.epoch <= self.records[-1].epoch:
            raise UsageError(f"Epoch {record.epoch} does not follow {self.records[-1].epoch}")
        self.records.append(record)

    @property
    def total_seconds(self) -> float:
        return sum(r.seconds for r in self.records)

    @property
    def final_val_loss(self) -> float:
        """Validation loss of the weights the run ended with."""
        if not self.records:
            return math.nan
        if self.best_epoch is not None:
            return next(r.val_loss for r in self.records if r.epoch == self.best_epoch)
        return self.records[-1].val_loss

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.records:
            writer.writerow(
                [r.epoch, f"{r.train_loss:.6f}", f"{r.val_loss:.6f}", f"{r.val_acc:.6f}",
                 f"{r.seconds:.3f}"]
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "stop_reason": self.stop_reason.value,
            "best_epoch": self.best_epoch,
            "final_val_loss": self.final_val_loss,
            "total_seconds": self.total_seconds,
            "epochs": [asdict(r) for r in self.records],
        }

    def save(self, directory: Path, stem: str = "history") -> tuple[Path, Path]:
        directory.mkdir(parents=True, exist_ok=True)
        csv_path = directory / f"{stem}.csv"
        json_path = directory / f"{stem}.json"
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        json_path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        return csv_path, json_path
