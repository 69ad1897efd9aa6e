"""Importance report and threshold-based feature selection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from itct.errors import DataError
from itct.featsel.forest import Forest, importance_vector

# absorbs rounding in the mean so equal importances all pass a "mean" threshold
_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ImportanceReport:
    """Per-feature importances (in schema order) and the resulting selection.

    ``selected`` holds features at or above ``threshold``; ``forced_included``
    holds force-included features that did not make the cut on their own.
    """

    importances: dict[str, float]
    threshold: float | None = None
    selected: tuple[str, ...] = ()
    forced_included: tuple[str, ...] = field(default_factory=tuple)

    @property
    def features(self) -> list[str]:
        """Model input features: selected, then forced."""
        return [*self.selected, *self.forced_included]

    def to_dict(self) -> dict:
        return {
            "importances": self.importances,
            "threshold": self.threshold,
            "selected": list(self.selected),
            "forced_included": list(self.forced_included),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ImportanceReport:
        try:
            return cls(
                importances={k: float(v) for k, v in data["importances"].items()},
                threshold=data.get("threshold"),
                selected=tuple(data.get("selected", ())),
                forced_included=tuple(data.get("forced_included", ())),
            )
        except (KeyError, AttributeError, TypeError, ValueError) as e:
            raise DataError(f"Malformed importance report: {e}") from None

    def save(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Path) -> ImportanceReport:
        if not path.is_file():
            raise DataError(f"Importance report not found: {path} (run 'itct select-features')")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise DataError(f"Invalid JSON in {path}: {e}") from None
        return cls.from_dict(data)


def importances(forest: Forest) -> ImportanceReport:
    values = importance_vector(forest)
    return ImportanceReport(
        importances={name: float(v) for name, v in zip(forest.feature_names, values, strict=True)}
    )


def resolve_threshold(report: ImportanceReport, threshold: str | float) -> float:
    if threshold == "mean":
        values = list(report.importances.values())
        return float(np.mean(values)) if values else 0.0
    try:
        return float(threshold)
    except (TypeError, ValueError):
        raise DataError(f"Threshold must be 'mean' or a number, got {threshold!r}") from None


def apply_selection(
    report: ImportanceReport,
    threshold: str | float = "mean",
    force_include: list[str] | tuple[str, ...] = (),
) -> ImportanceReport:
    """Return ``report`` with ``threshold``, ``selected`` and ``forced_included`` filled in.

    Selected features are ordered by descending importance, ties in schema order.
    """
    unknown = [f for f in force_include if f not in report.importances]
    if unknown:
        raise DataError(f"Force-included features not in schema: {', '.join(unknown)}")
    cut = resolve_threshold(report, threshold)
    names = list(report.importances)
    ranked = sorted(
        (n for n in names if report.importances[n] >= cut - _TOLERANCE),
        key=lambda n: (-report.importances[n], names.index(n)),
    )
    forced = tuple(dict.fromkeys(f for f in force_include if f not in ranked))
    return replace(report, threshold=cut, selected=tuple(ranked), forced_included=forced)


def select(
    report: ImportanceReport,
    threshold: str | float = "mean",
    force_include: list[str] | tuple[str, ...] = (),
) -> list[str]:
    return apply_selection(report, threshold, force_include).features
