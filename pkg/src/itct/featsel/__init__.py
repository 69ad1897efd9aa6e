"""Tree-ensemble feature importance and selection."""

from itct.featsel.forest import Forest, fit_forest
from itct.featsel.selection import ImportanceReport, apply_selection, importances, select

__all__ = [
    "Forest",
    "ImportanceReport",
    "apply_selection",
    "fit_forest",
    "importances",
    "select",
]
