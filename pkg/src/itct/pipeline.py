"""Stage functions shared by the CLI commands: cache, features, train, evaluate."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from itct.config import MODEL_FILENAME, PipelineConfig
from itct.data.cache import DatasetCache, read_cache, write_cache
from itct.data.encoded import SplitSpec, stratified_subsample
from itct.data.prepare import StepHook, prepare_dataset, subsample_cache
from itct.data.preprocess import ImputationStats
from itct.data.schema import load_schema
from itct.errors import DataError
from itct.featsel.forest import fit_forest
from itct.featsel.selection import ImportanceReport, apply_selection, importances
from itct.metrics.auc import auc_roc
from itct.metrics.classification import confusion
from itct.metrics.report import MetricsReport, build_report, write_report
from itct.model.network import ItctModel
from itct.model.serialize import ModelFile
from itct.training.history import History
from itct.training.loop import EpochCallback, predict, train
from itct.training.timing import Timings, measure


def build_cache(config: PipelineConfig, on_step: StepHook | None = None) -> DatasetCache:
    schema = load_schema(config.schema)
    cache = prepare_dataset(
        config.dataset_files, schema, SplitSpec(seed=config.seed), on_step=on_step
    )
    write_cache(config.cache_dir, cache)
    return cache


def open_cache(config: PipelineConfig) -> DatasetCache:
    """Read the preprocessed cache, applying ``config.fraction``."""
    return subsample_cache(read_cache(config.cache_dir), config.fraction, config.seed)


def compute_importances(config: PipelineConfig, cache: DatasetCache) -> ImportanceReport:
    sample = stratified_subsample(cache.train, seed=config.seed, cap=config.selection_cap)
    forest = fit_forest(sample, config.forest_config(), feature_order=cache.schema.features)
    report = apply_selection(
        importances(forest), config.selection_threshold, config.force_include
    )
    report.save(config.importances_path)
    return report


def model_features(config: PipelineConfig, cache: DatasetCache) -> list[str]:
    """Selected features when feature selection is on, otherwise every schema feature."""
    if not config.feature_selection:
        return cache.schema.features
    report = ImportanceReport.load(config.importances_path)
    unknown = [f for f in report.features if f not in cache.schema.features]
    if unknown:
        raise DataError(
            f"Importance report names features missing from the cache: {', '.join(unknown)}"
        )
    return report.features


@dataclass
class TrainResult:
    model_file: ModelFile
    history: History
    seconds: float


def train_model(
    config: PipelineConfig,
    cache: DatasetCache,
    features: list[str],
    on_epoch: EpochCallback | None = None,
) -> TrainResult:
    train_set = cache.train.select(features)
    val_set = cache.val.select(features)
    cat, cont = list(train_set.cat_names), list(train_set.cont_names)
    if not cat:
        raise DataError("The model needs at least one categorical feature; none were selected")

    vocab = cache.vocabulary.subset(cat)
    model = ItctModel(config.model_config(vocab.sizes(cat), len(cont)), seed=config.seed)
    (model, history), seconds = measure(
        "training", lambda: train(model, train_set, val_set, config.train_config(), on_epoch)
    )
    means = cache.imputation_means
    model_file = ModelFile(
        model=model,
        vocabulary=vocab,
        normalization=cache.normalization.subset(cont),
        cat_features=tuple(cat),
        cont_features=tuple(cont),
        imputation=ImputationStats({c: means[c] for c in cont if c in means}),
    )
    return TrainResult(model_file, history, seconds)


def check_compatible(model_file: ModelFile, cache: DatasetCache) -> None:
    missing = model_file.missing_features(cache.schema.features)
    if missing:
        raise DataError(f"Cache lacks the model's features: {', '.join(missing)}")
    cat = list(model_file.cat_features)
    if cache.vocabulary.subset(cat).to_dict() != model_file.vocabulary.to_dict():
        raise DataError("Model vocabulary differs from the cache's; was it trained on this cache?")


def evaluate_model(
    model_file: ModelFile,
    cache: DatasetCache,
    label: str,
    *,
    training_seconds: float = 0.0,
    val_loss: float = float("nan"),
) -> MetricsReport:
    check_compatible(model_file, cache)
    test = cache.test.select(model_file.features)
    model_file.dataset_features_match(test)
    timings = Timings({"training": training_seconds})
    scores, _ = measure("inference", lambda: predict(model_file.model, test), timings)
    return build_report(
        confusion(scores, test.labels),
        auc_roc(scores, test.labels),
        timings,
        model_file.model.count_params(),
        label,
        val_loss=val_loss,
        features=model_file.features,
    )


def train_and_evaluate(
    config: PipelineConfig, cache: DatasetCache, label: str, out_dir: Path
) -> tuple[TrainResult, MetricsReport]:
    """Train on the cache, save model + history, evaluate on the test split."""
    features = model_features(config, cache)
    result = train_model(config, cache, features)
    result.model_file.save(out_dir / MODEL_FILENAME)
    result.history.save(out_dir)
    report = evaluate_model(
        result.model_file,
        cache,
        label,
        training_seconds=result.seconds,
        val_loss=result.history.final_val_loss,
    )
    write_report(report, out_dir)
    return result, report
