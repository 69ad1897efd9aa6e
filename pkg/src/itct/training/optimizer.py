"""AdamW with decoupled weight decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from itct.config import TrainConfig
from itct.errors import NumericalError, ShapeError
from itct.nn.layers import Param


@dataclass
class OptimizerState:
    """First/second moments per parameter name and the global step count."""

    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0

    def moments(self, param: Param) -> tuple[np.ndarray, np.ndarray]:
        if param.name not in self.m:
            self.m[param.name] = np.zeros_like(param.value)
            self.v[param.name] = np.zeros_like(param.value)
        return self.m[param.name], self.v[param.name]


def adamw_step(params: list[Param], state: OptimizerState, config: TrainConfig) -> None:
    """One in-place update of every parameter from its ``grad``.

    m <- b1 m + (1 - b1) g;  v <- b2 v + (1 - b2) g^2
    theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + wd * theta)

    All gradients are checked before any parameter changes.
    """
    for p in params:
        if p.grad.shape != p.value.shape:
            raise ShapeError(f"{p.name}: gradient shape {p.grad.shape} != {p.value.shape}")
        if not np.all(np.isfinite(p.grad)):
            raise NumericalError(f"Non-finite gradient in '{p.name}'; step aborted")

    state.t += 1
    b1, b2 = config.beta_1, config.beta_2
    correction1 = 1.0 - b1**state.t
    correction2 = 1.0 - b2**state.t
    lr, wd, eps = config.learning_rate, config.weight_decay, config.epsilon
    for p in params:
        m, v = state.moments(p)
        g = p.grad
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        p.value -= (lr * (m_hat / (np.sqrt(v_hat) + eps) + wd * p.value)).astype(p.value.dtype)


class AdamW:
    """Thin stateful wrapper used by the training loop."""

    def __init__(self, params: list[Param], config: TrainConfig) -> None:
        self.params = params
        self.config = config
        self.state = OptimizerState()

    def step(self) -> None:
        adamw_step(self.params, self.state, self.config)
