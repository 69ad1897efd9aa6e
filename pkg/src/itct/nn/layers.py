"""Parameterized layers with cached forward state and explicit backward passes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itct.config import Activation
from itct.errors import ItctError, ShapeError
from itct.nn import functional as F


@dataclass(eq=False)
class Param:
    """A learnable tensor and its accumulated gradient."""

    name: str
    value: np.ndarray
    grad: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad.fill(0)


def glorot_uniform(
    rng: np.random.Generator, fan_in: int, fan_out: int, shape: tuple[int, ...], dtype: np.dtype
) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class Module:
    """Base class: a module owns ``Param``s and may contain child modules."""

    def params(self) -> list[Param]:
        out: list[Param] = []
        for value in vars(self).values():
            if isinstance(value, Param):
                out.append(value)
            elif isinstance(value, Module):
                out.extend(value.params())
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, Param):
                        out.append(item)
                    elif isinstance(item, Module):
                        out.extend(item.params())
        return out

    def zero_grad(self) -> None:
        for p in self.params():
            p.zero_grad()

    @staticmethod
    def _require(cache: object, name: str) -> None:
        if cache is None:
            raise ItctError(f"{name}: backward called before forward")


class Linear(Module):
    """y = x W + b over the last axis."""

    def __init__(
        self, name: str, fan_in: int, fan_out: int, rng: np.random.Generator, dtype: np.dtype
    ) -> None:
        self.name = name
        self.kernel = Param(
            f"{name}.kernel", glorot_uniform(rng, fan_in, fan_out, (fan_in, fan_out), dtype)
        )
        self.bias = Param(f"{name}.bias", np.zeros(fan_out, dtype=dtype))
        self._x: np.ndarray | None = None

    def forward(self, X: np.ndarray) -> np.ndarray:
        self._x = X
        return F.add_bias(F.matmul(X, self.kernel.value), self.bias.value)

    def backward(self, dY: np.ndarray) -> np.ndarray:
        self._require(self._x, self.name)
        dZ, db = F.add_bias_backward(dY)
        dX, dW = F.matmul_backward(dZ, self._x, self.kernel.value)
        self.kernel.grad += dW
        self.bias.grad += db
        return dX


class LayerNorm(Module):
    def __init__(self, name: str, width: int, eps: float, dtype: np.dtype) -> None:
        self.name = name
        self.eps = eps
        self.gamma = Param(f"{name}.gamma", np.ones(width, dtype=dtype))
        self.beta = Param(f"{name}.beta", np.zeros(width, dtype=dtype))
        self._cache: tuple[np.ndarray, np.ndarray] | None = None

    def forward(self, X: np.ndarray) -> np.ndarray:
        Y, self._cache = F.layer_norm(X, self.gamma.value, self.beta.value, self.eps)
        return Y

    def backward(self, dY: np.ndarray) -> np.ndarray:
        self._require(self._cache, self.name)
        dX, dgamma, dbeta = F.layer_norm_backward(dY, self._cache, self.gamma.value)
        self.gamma.grad += dgamma
        self.beta.grad += dbeta
        return dX


class Dropout(Module):
    def __init__(self, rate: float) -> None:
        self.rate = rate
        self._mask: np.ndarray | None = None

    def forward(
        self, X: np.ndarray, train_mode: bool, rng: np.random.Generator | None
    ) -> np.ndarray:
        Y, self._mask = F.dropout(X, self.rate, rng, train_mode)
        return Y

    def backward(self, dY: np.ndarray) -> np.ndarray:
        return F.dropout_backward(dY, self._mask)


class ActivationLayer(Module):
    def __init__(self, kind: Activation) -> None:
        self.kind = Activation(kind)
        self._x: np.ndarray | None = None

    def forward(self, X: np.ndarray) -> np.ndarray:
        self._x = X
        return F.activation(X, self.kind)

    def backward(self, dY: np.ndarray) -> np.ndarray:
        self._require(self._x, self.kind.value)
        return F.activation_backward(dY, self._x, self.kind)


def check_width(name: str, X: np.ndarray, width: int) -> None:
    if X.shape[-1] != width:
        raise ShapeError(f"{name}: expected last dimension {width}, got shape {X.shape}")
