"""End-to-end preparation: five capture CSVs in, encoded train/val/test cache out."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

from itct.data.cache import DatasetCache
from itct.data.encoded import SplitSpec, encode, split_indices, stratified_subsample
from itct.data.preprocess import (
    N_CAPTURE_FILES,
    balance_files,
    balance_plan,
    fit_normalization,
    impute_missing,
)
from itct.data.schema import Schema
from itct.data.table import ClassCounts, DatasetTable, concat_tables, load_csv
from itct.data.vocab import build_vocabulary
from itct.errors import UsageError

StepHook = Callable[[str], None]


def _counts(c: ClassCounts) -> dict[str, int]:
    return {"normal": c.normal, "attack": c.attack}


def prepare_dataset(
    files: list[Path],
    schema: Schema,
    spec: SplitSpec,
    on_step: StepHook | None = None,
) -> DatasetCache:
    """load -> impute (per file) -> balance -> concat -> split -> fit vocab/stats -> encode."""
    if len(files) != N_CAPTURE_FILES:
        raise UsageError(
            f"dataset_files must list {N_CAPTURE_FILES} CSV files "
            f"(the last one normal-only), got {len(files)}"
        )
    step = on_step or (lambda _msg: None)

    tables: list[DatasetTable] = []
    imputation: dict[str, dict[str, float]] = {}
    files_summary: dict[str, dict] = {}
    for path in files:
        step(f"Loading {path.name}")
        table = load_csv(path, schema)
        filled, stats = impute_missing(table)
        tables.append(filled)
        imputation[path.name] = stats.to_dict()
        files_summary[path.name] = {
            "loaded_rows": len(table),
            "loaded": _counts(table.class_counts()),
        }

    step("Balancing classes")
    plan = balance_plan([t.class_counts() for t in tables])
    balanced = balance_files(tables, seed=spec.seed)
    for path, table in zip(files, balanced, strict=True):
        files_summary[path.name]["balanced"] = _counts(table.class_counts())

    step("Splitting and encoding")
    combined = concat_tables(balanced)
    train_idx, val_idx, test_idx = split_indices(len(combined), spec)
    train_table = combined.take(train_idx)
    vocab = build_vocabulary(train_table)
    stats = fit_normalization(train_table)
    train, val, test = (
        encode(combined.take(idx), vocab, stats) for idx in (train_idx, val_idx, test_idx)
    )

    summary = {
        "files": files_summary,
        "balance": {
            "surplus_attack_pool": plan.surplus_attack_pool,
            "appended_attack": plan.appended_attack,
        },
        "splits": {
            name: dict(zip(("normal", "attack"), ds.class_counts(), strict=True))
            for name, ds in (("train", train), ("val", val), ("test", test))
        },
        "seed": spec.seed,
    }
    return DatasetCache(
        schema=schema,
        vocabulary=vocab,
        normalization=stats,
        train=train,
        val=val,
        test=test,
        imputation=imputation,
        summary=summary,
    )


def subsample_cache(cache: DatasetCache, fraction: float, seed: int) -> DatasetCache:
    """Stratified, seeded subsample of every split; ``fraction`` 1.0 is a no-op."""
    if fraction >= 1.0:
        return cache
    train, val, test = (
        stratified_subsample(ds, seed=seed, fraction=fraction)
        for ds in (cache.train, cache.val, cache.test)
    )
    return DatasetCache(
        schema=cache.schema,
        vocabulary=cache.vocabulary,
        normalization=cache.normalization,
        train=train,
        val=val,
        test=test,
        imputation=cache.imputation,
        summary=cache.summary,
    )
