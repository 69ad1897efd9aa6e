"""Forward oracles and finite-difference checks for the primitives."""

from __future__ import annotations

import math

import numpy as np
import pytest

from itct.errors import NumericalError, ShapeError, UsageError
from itct.nn import functional as F

from .gradcheck import numeric_grad, relative_error

TOL = 1e-6


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


def test_matmul_values() -> None:
    C = F.matmul(np.array([[1.0, 2.0]]), np.array([[3.0], [4.0]]))
    np.testing.assert_array_equal(C, [[11.0]])
    B = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(F.matmul(np.eye(2), B), B)


def test_matmul_shape_error_names_both_shapes() -> None:
    with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 3\)"):
        F.matmul(np.zeros((2, 3)), np.zeros((2, 3)))


def test_matmul_backward_hand_case() -> None:
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    B = np.array([[5.0, 6.0], [7.0, 8.0]])
    dC = np.array([[1.0, 0.0], [0.0, 1.0]])
    dA, dB = F.matmul_backward(dC, A, B)
    np.testing.assert_array_equal(dA, B.T)
    np.testing.assert_array_equal(dB, A.T)


def test_matmul_backward_batched_shared_weight(rng) -> None:
    A = rng.normal(size=(2, 3, 4))
    B = rng.normal(size=(4, 5))
    W = rng.normal(size=(2, 3, 5))
    dA, dB = F.matmul_backward(W, A, B)
    assert relative_error(dA, numeric_grad(lambda: float((F.matmul(A, B) * W).sum()), A)) < TOL
    assert relative_error(dB, numeric_grad(lambda: float((F.matmul(A, B) * W).sum()), B)) < TOL


def test_add_bias(rng) -> None:
    X = rng.normal(size=(3, 2))
    b = np.array([1.0, -1.0])
    np.testing.assert_array_equal(F.add_bias(X, b), X + b)
    with pytest.raises(ShapeError):
        F.add_bias(X, np.zeros(3))
    _, db = F.add_bias_backward(np.ones((3, 2)))
    np.testing.assert_array_equal(db, [3.0, 3.0])


def test_concat(rng) -> None:
    X, Y = rng.normal(size=(4, 2)), rng.normal(size=(4, 3))
    Z = F.concat_features(X, Y)
    assert Z.shape == (4, 5)
    dX, dY = F.concat_backward(Z, 2)
    np.testing.assert_array_equal(dX, X)
    np.testing.assert_array_equal(dY, Y)
    with pytest.raises(ShapeError):
        F.concat_features(X, np.zeros((3, 1)))


def test_softmax_oracles() -> None:
    np.testing.assert_allclose(F.softmax_rows(np.zeros((1, 3))), [[1 / 3] * 3], atol=1e-12)
    np.testing.assert_allclose(
        F.softmax_rows(np.array([[math.log(2.0), 0.0]])), [[2 / 3, 1 / 3]], atol=1e-12
    )
    big = F.softmax_rows(np.array([[1000.0, 0.0]]))
    assert np.isfinite(big).all()
    np.testing.assert_allclose(big, [[1.0, 0.0]], atol=1e-12)


def test_softmax_rows_sum_to_one(rng) -> None:
    Y = F.softmax_rows(rng.normal(size=(5, 7)) * 10)
    np.testing.assert_allclose(Y.sum(axis=-1), 1.0, atol=1e-9)


def test_softmax_sum_has_zero_gradient(rng) -> None:
    Y = F.softmax_rows(rng.normal(size=(2, 4)))
    np.testing.assert_allclose(F.softmax_backward(np.ones_like(Y), Y), 0.0, atol=1e-12)


def test_softmax_backward(rng) -> None:
    X = rng.normal(size=(3, 4))
    W = rng.normal(size=(3, 4))
    analytic = F.softmax_backward(W, F.softmax_rows(X))
    numeric = numeric_grad(lambda: float((F.softmax_rows(X) * W).sum()), X)
    assert relative_error(analytic, numeric) < TOL


def test_layer_norm_oracles() -> None:
    one, zero = np.ones(2), np.zeros(2)
    Y, _ = F.layer_norm(np.array([[5.0, 5.0]]), one, zero)
    np.testing.assert_allclose(Y, [[0.0, 0.0]], atol=1e-9)
    Y, _ = F.layer_norm(np.array([[-1.0, 1.0]]), one, zero)
    np.testing.assert_allclose(Y, [[-1.0, 1.0]], atol=1e-6)
    Y, _ = F.layer_norm(np.array([[0.0, 2.0]]), np.full(2, 2.0), one)
    np.testing.assert_allclose(Y, [[-1.0, 3.0]], atol=1e-5)


def test_layer_norm_backward(rng) -> None:
    X = rng.normal(size=(2, 3, 5))
    gamma, beta = rng.normal(size=5), rng.normal(size=5)
    W = rng.normal(size=X.shape)

    def loss() -> float:
        return float((F.layer_norm(X, gamma, beta)[0] * W).sum())

    _, cache = F.layer_norm(X, gamma, beta)
    dX, dgamma, dbeta = F.layer_norm_backward(W, cache, gamma)
    assert relative_error(dX, numeric_grad(loss, X)) < TOL
    assert relative_error(dgamma, numeric_grad(loss, gamma)) < TOL
    assert relative_error(dbeta, numeric_grad(loss, beta)) < TOL


def test_layer_norm_shape_error() -> None:
    with pytest.raises(ShapeError):
        F.layer_norm(np.zeros((2, 3)), np.ones(2), np.zeros(2))


def test_relu() -> None:
    np.testing.assert_array_equal(F.activation(np.array([-1.0, 2.0]), "relu"), [0.0, 2.0])


def test_gelu_values() -> None:
    X = np.array([0.0, 1.0, -1.0])
    # x * Phi(x)
    np.testing.assert_allclose(
        F.activation(X, "gelu"), [0.0, 0.8413447460685429, -0.15865525393145707], atol=1e-12
    )


@pytest.mark.parametrize("kind", ["relu", "gelu", "sigmoid"])
def test_activation_backward(kind: str, rng) -> None:
    X = rng.normal(size=(4, 3))
    X[np.abs(X) < 1e-3] = 0.5  # keep relu away from its kink
    W = rng.normal(size=X.shape)
    analytic = F.activation_backward(W, X, kind)
    numeric = numeric_grad(lambda: float((F.activation(X, kind) * W).sum()), X)
    assert relative_error(analytic, numeric) < TOL


def test_sigmoid_is_stable() -> None:
    Y = F.sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    np.testing.assert_array_equal(Y, [0.0, 0.5, 1.0])


def test_dropout_rate_zero_is_identity(rng) -> None:
    X = rng.normal(size=(3, 3))
    for train_mode in (True, False):
        Y, mask = F.dropout(X, 0.0, rng, train_mode)
        assert Y is X and mask is None


def test_dropout_eval_mode_is_identity(rng) -> None:
    X = rng.normal(size=(3, 3))
    Y, _ = F.dropout(X, 0.5, None, train_mode=False)
    assert Y is X


def test_dropout_preserves_expectation() -> None:
    Y, mask = F.dropout(np.ones(10_000), 0.5, np.random.default_rng(1), train_mode=True)
    assert abs(Y.mean() - 1.0) < 0.05
    np.testing.assert_array_equal(F.dropout_backward(np.ones(10_000), mask), mask)


def test_dropout_is_seeded() -> None:
    a, _ = F.dropout(np.ones(50), 0.3, np.random.default_rng(4), True)
    b, _ = F.dropout(np.ones(50), 0.3, np.random.default_rng(4), True)
    np.testing.assert_array_equal(a, b)


def test_dropout_errors() -> None:
    with pytest.raises(UsageError):
        F.dropout(np.ones(3), 1.0, np.random.default_rng(0), True)
    with pytest.raises(UsageError, match="random generator"):
        F.dropout(np.ones(3), 0.5, None, True)


def test_check_finite() -> None:
    F.check_finite("ok", np.ones(3))
    with pytest.raises(NumericalError, match="2 non-finite"):
        F.check_finite("grad", np.array([1.0, np.nan, np.inf]))
