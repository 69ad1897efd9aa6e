"""Wall-clock timing of pipeline phases."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TypeVar

T = TypeVar("T")


@dataclass
class Timings:
    seconds: dict[str, float] = field(default_factory=dict)

    def record(self, phase: str, seconds: float) -> None:
        self.seconds[phase] = self.seconds.get(phase, 0.0) + seconds

    def get(self, phase: str) -> float:
        return self.seconds.get(phase, 0.0)


def measure(phase: str, f: Callable[[], T], timings: Timings | None = None) -> tuple[T, float]:
    start = time.perf_counter()
    result = f()
    elapsed = time.perf_counter() - start
    if timings is not None:
        timings.record(phase, elapsed)
    return result, elapsed
