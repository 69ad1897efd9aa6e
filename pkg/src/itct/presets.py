"""Experiment presets: the three configurations compared in the results table."""

from __future__ import annotations

from dataclasses import dataclass, replace

from itct.config import PipelineConfig


@dataclass(frozen=True)
class Experiment:
    """A named toggle combination."""

    name: str
    label: str
    description: str
    feature_selection: bool
    callback: bool

    def apply(self, config: PipelineConfig) -> PipelineConfig:
        return replace(config, feature_selection=self.feature_selection, callback=self.callback)


EXPERIMENTS: dict[str, Experiment] = {
    "experiment-1": Experiment(
        name="experiment-1",
        label="Experiment 1 (w/FE & w/Callback)",
        description="Selected features, early stopping on validation loss",
        feature_selection=True,
        callback=True,
    ),
    "experiment-2": Experiment(
        name="experiment-2",
        label="Experiment 2 (w/o FE & w/o Callback)",
        description="All features, fixed epoch budget",
        feature_selection=False,
        callback=False,
    ),
    "experiment-3": Experiment(
        name="experiment-3",
        label="Experiment 3 (w/o FE & w/Callback)",
        description="All features, early stopping on validation loss",
        feature_selection=False,
        callback=True,
    ),
}


def get_experiment(name: str) -> Experiment | None:
    return EXPERIMENTS.get(name)


def list_experiments() -> list[Experiment]:
    return list(EXPERIMENTS.values())
