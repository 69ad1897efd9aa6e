"""Multi-head self-attention and the post-norm transformer block."""

from __future__ import annotations

import math

import numpy as np

from itct.config import Activation
from itct.errors import ShapeError
from itct.nn import functional as F
from itct.nn.layers import ActivationLayer, Dropout, LayerNorm, Linear, Module, check_width


class MultiHeadAttention(Module):
    """Scaled dot-product self-attention over ``(batch, tokens, d)`` inputs.

    The query, key and value kernels are ``d x d``: head ``h`` owns columns
    ``h*d_head:(h+1)*d_head``. Scores are divided by ``sqrt(d_head)``.
    """

    def __init__(
        self,
        name: str,
        d: int,
        n_heads: int,
        rng: np.random.Generator,
        dtype: np.dtype,
        dropout_rate: float = 0.0,
    ) -> None:
        if n_heads < 1 or d % n_heads:
            raise ShapeError(f"{name}: width {d} is not divisible by {n_heads} heads")
        self.name = name
        self.d = d
        self.n_heads = n_heads
        self.d_head = d // n_heads
        self.query = Linear(f"{name}.query", d, d, rng, dtype)
        self.key = Linear(f"{name}.key", d, d, rng, dtype)
        self.value = Linear(f"{name}.value", d, d, rng, dtype)
        self.output = Linear(f"{name}.output", d, d, rng, dtype)
        self.dropout = Dropout(dropout_rate)
        self._cache: tuple[np.ndarray, ...] | None = None
        self.last_scores: np.ndarray | None = None

    def _split(self, X: np.ndarray) -> np.ndarray:
        b, n, _ = X.shape
        return X.reshape(b, n, self.n_heads, self.d_head).transpose(0, 2, 1, 3)

    def _merge(self, X: np.ndarray) -> np.ndarray:
        b, _, n, _ = X.shape
        return X.transpose(0, 2, 1, 3).reshape(b, n, self.d)

    def forward(
        self, X: np.ndarray, train_mode: bool = False, rng: np.random.Generator | None = None
    ) -> np.ndarray:
        if X.ndim != 3:
            raise ShapeError(f"{self.name}: expected (batch, tokens, d), got {X.shape}")
        check_width(self.name, X, self.d)
        scale = X.dtype.type(1.0 / math.sqrt(self.d_head))
        Q = self._split(self.query.forward(X))
        K = self._split(self.key.forward(X))
        V = self._split(self.value.forward(X))
        A = F.softmax_rows((Q @ K.transpose(0, 1, 3, 2)) * scale)
        A_drop = self.dropout.forward(A, train_mode, rng)
        self._cache = (Q, K, V, A, A_drop, scale)
        self.last_scores = A
        return self.output.forward(self._merge(A_drop @ V))

    def backward(self, dY: np.ndarray) -> np.ndarray:
        self._require(self._cache, self.name)
        Q, K, V, A, A_drop, scale = self._cache
        dO = self._split(self.output.backward(dY))
        dA_drop = dO @ V.transpose(0, 1, 3, 2)
        dV = A_drop.transpose(0, 1, 3, 2) @ dO
        dS = F.softmax_backward(self.dropout.backward(dA_drop), A) * scale
        dQ = dS @ K
        dK = dS.transpose(0, 1, 3, 2) @ Q
        return (
            self.query.backward(self._merge(dQ))
            + self.key.backward(self._merge(dK))
            + self.value.backward(self._merge(dV))
        )


class TransformerBlock(Module):
    """attention -> add -> norm -> feed-forward (d -> d) + dropout -> add -> norm."""

    def __init__(
        self,
        name: str,
        d: int,
        n_heads: int,
        rng: np.random.Generator,
        dtype: np.dtype,
        *,
        dropout_rate: float = 0.0,
        activation: Activation = Activation.GELU,
        attention_dropout: bool = True,
        eps: float = 1e-6,
    ) -> None:
        self.name = name
        self.attention = MultiHeadAttention(
            f"{name}.attention", d, n_heads, rng, dtype,
            dropout_rate=dropout_rate if attention_dropout else 0.0,
        )
        self.norm1 = LayerNorm(f"{name}.norm1", d, eps, dtype)
        self.ffn = Linear(f"{name}.ffn", d, d, rng, dtype)
        self.ffn_act = ActivationLayer(activation)
        self.ffn_dropout = Dropout(dropout_rate)
        self.norm2 = LayerNorm(f"{name}.norm2", d, eps, dtype)

    def forward(
        self, X: np.ndarray, train_mode: bool = False, rng: np.random.Generator | None = None
    ) -> np.ndarray:
        H = self.norm1.forward(X + self.attention.forward(X, train_mode, rng))
        ff = self.ffn_dropout.forward(self.ffn_act.forward(self.ffn.forward(H)), train_mode, rng)
        return self.norm2.forward(H + ff)

    def backward(self, dY: np.ndarray) -> np.ndarray:
        dZ = self.norm2.backward(dY)
        dH = dZ + self.ffn.backward(self.ffn_act.backward(self.ffn_dropout.backward(dZ)))
        dX1 = self.norm1.backward(dH)
        return dX1 + self.attention.backward(dX1)
