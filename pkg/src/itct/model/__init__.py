"""ITCT network, loss and model files."""

from itct.model.loss import bce_logit_grad, binary_cross_entropy
from itct.model.network import ItctModel, expected_param_count, init_model
from itct.model.serialize import ModelFile, load_model, save_model

__all__ = [
    "ItctModel",
    "ModelFile",
    "bce_logit_grad",
    "binary_cross_entropy",
    "expected_param_count",
    "init_model",
    "load_model",
    "save_model",
]
