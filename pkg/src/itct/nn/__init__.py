"""Dense numpy layers with hand-derived gradients."""

from itct.nn.attention import MultiHeadAttention, TransformerBlock
from itct.nn.layers import ActivationLayer, Dropout, LayerNorm, Linear, Module, Param

__all__ = [
    "ActivationLayer",
    "Dropout",
    "LayerNorm",
    "Linear",
    "Module",
    "MultiHeadAttention",
    "Param",
    "TransformerBlock",
]
