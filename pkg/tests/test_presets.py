"""Tests for experiment presets."""

from itct.config import PipelineConfig
from itct.presets import get_experiment, list_experiments


def test_list_experiments():
    experiments = list_experiments()
    assert [e.name for e in experiments] == ["experiment-1", "experiment-2", "experiment-3"]


def test_toggles():
    toggles = {e.name: (e.feature_selection, e.callback) for e in list_experiments()}
    assert toggles == {
        "experiment-1": (True, True),
        "experiment-2": (False, False),
        "experiment-3": (False, True),
    }


def test_get_experiment_none():
    assert get_experiment("nonexistent") is None


def test_apply_keeps_other_settings():
    base = PipelineConfig(feature_selection=True, callback=True, epochs=7, seed=1)
    config = get_experiment("experiment-2").apply(base)
    assert config.feature_selection is False
    assert config.callback is False
    assert config.epochs == 7
    assert config.train_config().callback is False
    assert base.callback is True


def test_labels_name_the_toggles():
    assert "w/o FE" in get_experiment("experiment-3").label
    assert "w/Callback" in get_experiment("experiment-3").label
