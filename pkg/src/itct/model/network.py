"""The ITCT network: column embeddings, transformer blocks, fusion and MLP head."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import replace

import numpy as np

from itct.config import ModelConfig
from itct.data.encoded import Batch
from itct.errors import DataError, ShapeError
from itct.model.loss import bce_logit_grad, binary_cross_entropy
from itct.nn import functional as F
from itct.nn.attention import TransformerBlock
from itct.nn.layers import ActivationLayer, Dropout, LayerNorm, Linear, Module, Param


class ColumnEmbeddings(Module):
    """Per-column lookup: token ``j`` of column ``i`` embeds as ``[c_i, w_i[j]]``.

    ``c_i`` is one learnable scalar per column, ``w_i`` a ``vocab_i x (d - 1)`` table.
    """

    def __init__(
        self, vocab_sizes: Sequence[int], d: int, rng: np.random.Generator, dtype: np.dtype
    ) -> None:
        self.vocab_sizes = tuple(vocab_sizes)
        self.d = d
        self.identifiers = Param(
            "embedding.identifiers",
            rng.uniform(-1.0, 1.0, size=len(self.vocab_sizes)).astype(dtype),
        )
        limit = [np.sqrt(6.0 / (v + d - 1)) for v in self.vocab_sizes]
        self.tables = [
            Param(f"embedding.{i}.values", rng.uniform(-lim, lim, size=(v, d - 1)).astype(dtype))
            for i, (v, lim) in enumerate(zip(self.vocab_sizes, limit, strict=True))
        ]
        self._ids: np.ndarray | None = None

    def forward(self, ids: np.ndarray) -> np.ndarray:
        n, m = ids.shape
        if m != len(self.vocab_sizes):
            raise ShapeError(f"embedding: expected {len(self.vocab_sizes)} columns, got {m}")
        for i, size in enumerate(self.vocab_sizes):
            column = ids[:, i]
            if column.size and (column.min() < 0 or column.max() >= size):
                bad = int(column[(column < 0) | (column >= size)][0])
                raise DataError(f"Token id {bad} out of range for column {i} (vocab size {size})")
        out = np.empty((n, m, self.d), dtype=self.identifiers.value.dtype)
        out[:, :, 0] = self.identifiers.value
        for i, table in enumerate(self.tables):
            out[:, i, 1:] = table.value[ids[:, i]]
        self._ids = ids
        return out

    def backward(self, dE: np.ndarray) -> None:
        self._require(self._ids, "embedding")
        self.identifiers.grad += dE[:, :, 0].sum(axis=0)
        for i, table in enumerate(self.tables):
            np.add.at(table.grad, self._ids[:, i], dE[:, i, 1:])


class ItctModel(Module):
    """Column embeddings -> N transformer blocks -> flatten ++ normalized continuous -> MLP.

    ``forward`` returns attack probabilities of shape ``(batch,)``.
    """

    def __init__(self, config: ModelConfig, seed: int = 0) -> None:
        self.config = config
        dtype = np.dtype(config.dtype.value)
        self.dtype = dtype
        rng = np.random.default_rng(seed)
        d = config.embedding_dims

        self.embeddings = ColumnEmbeddings(config.vocab_sizes, d, rng, dtype)
        self.blocks = [
            TransformerBlock(
                f"block{b}", d, config.attention_heads, rng, dtype,
                dropout_rate=config.dropout_rate,
                activation=config.ffn_activation,
                attention_dropout=config.attention_dropout,
                eps=config.layer_norm_eps,
            )
            for b in range(config.transformer_blocks)
        ]
        self.cont_norm = (
            LayerNorm("continuous_norm", config.n_continuous, config.layer_norm_eps, dtype)
            if config.n_continuous
            else None
        )
        widths = [config.fusion_width, *config.hidden_widths]
        self.hidden = [
            Linear(f"head.dense{i}", w_in, w_out, rng, dtype)
            for i, (w_in, w_out) in enumerate(zip(widths[:-1], widths[1:], strict=True))
        ]
        self.hidden_acts = [ActivationLayer(config.head_activation) for _ in self.hidden]
        self.hidden_dropouts = [Dropout(config.dropout_rate) for _ in self.hidden]
        self.output = Linear("head.output", widths[-1], 1, rng, dtype)
        # scores stay strictly inside (0, 1) in the model dtype
        self._prob_floor = dtype.type(np.finfo(dtype).eps)
        self._probs: np.ndarray | None = None

    # -- forward / backward -------------------------------------------------

    def forward(
        self,
        batch: Batch,
        train_mode: bool = False,
        rng: np.random.Generator | None = None,
        trace: dict[str, object] | None = None,
    ) -> np.ndarray:
        cat, cont = batch.cat, np.asarray(batch.cont, dtype=self.dtype)
        n = cat.shape[0]
        if cont.shape != (n, self.config.n_continuous):
            raise ShapeError(
                f"Continuous input has shape {cont.shape}, "
                f"expected ({n}, {self.config.n_continuous})"
            )

        E = self.embeddings.forward(cat)
        H = E
        contextual = []
        for block in self.blocks:
            H = block.forward(H, train_mode, rng)
            contextual.append(H)
        flat = H.reshape(n, -1)
        cont_normed = self.cont_norm.forward(cont) if self.cont_norm is not None else cont
        X = F.concat_features(flat, cont_normed)
        fusion = X
        hidden = []
        layers = zip(self.hidden, self.hidden_acts, self.hidden_dropouts, strict=True)
        for dense, act, drop in layers:
            X = drop.forward(act.forward(dense.forward(X)), train_mode, rng)
            hidden.append(X)
        logits = F.check_finite("logits", self.output.forward(X)[:, 0])
        probs = np.clip(F.sigmoid(logits), self._prob_floor, 1 - self._prob_floor)
        self._probs = probs

        if trace is not None:
            trace.update(
                embeddings=E,
                blocks=contextual,
                contextual=H,
                continuous=cont_normed,
                fusion=fusion,
                hidden=hidden,
                logits=logits,
                probabilities=probs,
            )
        return probs

    def backward(self, dlogits: np.ndarray) -> None:
        """Accumulate parameter gradients given d(loss)/d(logits)."""
        self._require(self._probs, "model")
        dX = self.output.backward(dlogits.reshape(-1, 1).astype(self.dtype))
        for dense, act, drop in zip(
            reversed(self.hidden), reversed(self.hidden_acts), reversed(self.hidden_dropouts),
            strict=True,
        ):
            dX = dense.backward(act.backward(drop.backward(dX)))
        n = dX.shape[0]
        width = self.config.embedding_dims * self.config.n_categorical
        d_flat, d_cont = F.concat_backward(dX, width)
        if self.cont_norm is not None:
            self.cont_norm.backward(d_cont)
        dH = d_flat.reshape(n, self.config.n_categorical, self.config.embedding_dims)
        for block in reversed(self.blocks):
            dH = block.backward(dH)
        self.embeddings.backward(dH)

    def compute_gradients(
        self, batch: Batch, rng: np.random.Generator | None = None, train_mode: bool = True
    ) -> float:
        """Zero grads, run forward + backward on ``batch`` and return the mean BCE loss."""
        self.zero_grad()
        probs = self.forward(batch, train_mode=train_mode, rng=rng)
        loss = binary_cross_entropy(probs, batch.labels)
        self.backward(bce_logit_grad(probs, batch.labels))
        return loss

    def predict_proba(self, batch: Batch) -> np.ndarray:
        return self.forward(batch, train_mode=False)

    def set_dropout_rate(self, rate: float) -> None:
        """Change every dropout layer to ``rate``; the stored config follows."""
        self.config = replace(self.config, dropout_rate=rate)
        for block in self.blocks:
            block.ffn_dropout.rate = rate
            if self.config.attention_dropout:
                block.attention.dropout.rate = rate
        for drop in self.hidden_dropouts:
            drop.rate = rate

    # -- parameters -------------------------------------------------------------

    def named_params(self) -> dict[str, Param]:
        return {p.name: p for p in self.params()}

    def count_params(self) -> int:
        return sum(p.size for p in self.params())

    def param_breakdown(self) -> dict[str, int]:
        return {p.name: p.size for p in self.params()}

    def state(self) -> dict[str, np.ndarray]:
        return {p.name: p.value.copy() for p in self.params()}

    def load_state(self, state: dict[str, np.ndarray]) -> None:
        params = self.named_params()
        if set(state) != set(params):
            missing = sorted(set(params) - set(state))
            extra = sorted(set(state) - set(params))
            raise ShapeError(f"State does not match model: missing {missing}, unexpected {extra}")
        for name, value in state.items():
            p = params[name]
            if value.shape != p.shape:
                raise ShapeError(f"{name}: expected shape {p.shape}, got {value.shape}")
            p.value[...] = value


def init_model(config: ModelConfig, seed: int = 0) -> ItctModel:
    return ItctModel(config, seed)


def expected_param_count(config: ModelConfig) -> int:
    """Closed-form count of learnable scalars for ``config``."""
    d, m, c = config.embedding_dims, config.n_categorical, config.n_continuous
    embeddings = sum(v * (d - 1) for v in config.vocab_sizes) + m
    blocks = config.transformer_blocks * (5 * d * d + 9 * d)
    cont_norm = 2 * c if c else 0
    widths = [config.fusion_width, *config.hidden_widths, 1]
    head = sum(w_in * w_out + w_out for w_in, w_out in zip(widths[:-1], widths[1:], strict=True))
    return embeddings + blocks + cont_norm + head
