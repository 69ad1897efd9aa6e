"""Stateless forward/backward primitives.

Every ``*_backward`` returns the exact vector-Jacobian product of its forward
op given the upstream gradient. Arrays may carry any number of leading batch
dimensions; the last axis is the feature axis.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from itct.config import Activation
from itct.errors import NumericalError, ShapeError, UsageError

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def check_finite(name: str, array: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        bad = int(np.size(array) - np.count_nonzero(np.isfinite(array)))
        raise NumericalError(f"{name}: {bad} non-finite value(s)")
    return array


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[-1] != B.shape[-2 if B.ndim > 1 else 0]:
        raise ShapeError(f"matmul: cannot multiply {A.shape} by {B.shape}")
    return A @ B


def matmul_backward(
    dC: np.ndarray, A: np.ndarray, B: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """dA = dC Bᵀ, dB = Aᵀ dC (summed over batch dims when B is shared)."""
    dA = dC @ np.swapaxes(B, -1, -2)
    if B.ndim == 2 and A.ndim > 2:
        dB = A.reshape(-1, A.shape[-1]).T @ dC.reshape(-1, dC.shape[-1])
    else:
        dB = np.swapaxes(A, -1, -2) @ dC
    return dA, dB


def add_bias(X: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b.shape != (X.shape[-1],):
        raise ShapeError(f"add_bias: bias {b.shape} does not fit input {X.shape}")
    return X + b


def add_bias_backward(dY: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return dY, dY.reshape(-1, dY.shape[-1]).sum(axis=0)


def concat_features(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[:-1] != Y.shape[:-1]:
        raise ShapeError(f"concat: row shapes differ, {X.shape} vs {Y.shape}")
    return np.concatenate([X, Y], axis=-1)


def concat_backward(dZ: np.ndarray, left_width: int) -> tuple[np.ndarray, np.ndarray]:
    return dZ[..., :left_width], dZ[..., left_width:]


def softmax_rows(X: np.ndarray) -> np.ndarray:
    shifted = X - X.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_backward(dY: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return Y * (dY - (dY * Y).sum(axis=-1, keepdims=True))


def layer_norm(
    X: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = 1e-6
) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """Returns the output and the ``(x_hat, inv_std)`` cache for the backward pass."""
    if gamma.shape != (X.shape[-1],) or beta.shape != gamma.shape:
        raise ShapeError(
            f"layer_norm: gamma {gamma.shape} / beta {beta.shape} do not fit input {X.shape}"
        )
    mean = X.mean(axis=-1, keepdims=True)
    var = X.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    x_hat = (X - mean) * inv_std
    return x_hat * gamma + beta, (x_hat, inv_std)


def layer_norm_backward(
    dY: np.ndarray, cache: tuple[np.ndarray, np.ndarray], gamma: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x_hat, inv_std = cache
    flat_dy = dY.reshape(-1, dY.shape[-1])
    dgamma = (flat_dy * x_hat.reshape(flat_dy.shape)).sum(axis=0)
    dbeta = flat_dy.sum(axis=0)
    g = dY * gamma
    dX = inv_std * (
        g - g.mean(axis=-1, keepdims=True) - x_hat * (g * x_hat).mean(axis=-1, keepdims=True)
    )
    return dX, dgamma, dbeta


def activation(X: np.ndarray, kind: Activation | str) -> np.ndarray:
    match Activation(kind):
        case Activation.RELU:
            return np.maximum(X, 0.0)
        case Activation.GELU:
            return 0.5 * X * (1.0 + special.erf(X * _SQRT_HALF))
        case Activation.SIGMOID:
            return sigmoid(X)


def activation_backward(dY: np.ndarray, X: np.ndarray, kind: Activation | str) -> np.ndarray:
    match Activation(kind):
        case Activation.RELU:
            return dY * (X > 0)
        case Activation.GELU:
            cdf = 0.5 * (1.0 + special.erf(X * _SQRT_HALF))
            pdf = _INV_SQRT_2PI * np.exp(-0.5 * X * X)
            return dY * (cdf + X * pdf)
        case Activation.SIGMOID:
            s = sigmoid(X)
            return dY * s * (1.0 - s)


def sigmoid(X: np.ndarray) -> np.ndarray:
    # split by sign so exp never overflows
    out = np.empty_like(X)
    pos = X >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-X[pos]))
    e = np.exp(X[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def dropout(
    X: np.ndarray, rate: float, rng: np.random.Generator | None, train_mode: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    """Inverted dropout. Returns the output and the scaled keep-mask (``None`` if identity)."""
    if not 0.0 <= rate < 1.0:
        raise UsageError(f"dropout rate must be in [0, 1), got {rate}")
    if not train_mode or rate == 0.0:
        return X, None
    if rng is None:
        raise UsageError("dropout in train mode needs a random generator")
    mask = (rng.random(X.shape) >= rate).astype(X.dtype) / X.dtype.type(1.0 - rate)
    return X * mask, mask


def dropout_backward(dY: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    return dY if mask is None else dY * mask
