"""Three-layer perceptron: d inputs, round(2d/3) hidden units, one output.

tanh activation on both layers, so the output lives in (-1, 1) and is
thresholded at zero: adult iff output >= 0. Targets are +1 (adult) and
-1 (child); the loss is mean squared error. Parameters live in one flat
vector so the optimizers can treat training as generic minimization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def hidden_size(d: int) -> int:
    return max(1, round(2 * d / 3))


def n_params(d: int, h: int) -> int:
    return (d + 1) * h + (h + 1)


@dataclass
class MlpNetwork:
    """Fixed-architecture 3-layer MLP over a flat parameter vector."""

    d: int
    h: int
    params: np.ndarray
    standardizer: object | None = None
    converged: bool = True
    loss_trace: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.params.shape != (n_params(self.d, self.h),):
            raise ValueError("parameter vector length mismatch")

    def unflatten(self, params: np.ndarray | None = None):
        """Split the flat vector into (W1 h x d, b1 h, w2 h, b2)."""
        p = self.params if params is None else params
        ofs = 0
        W1 = p[ofs : ofs + self.h * self.d].reshape(self.h, self.d)
        ofs += self.h * self.d
        b1 = p[ofs : ofs + self.h]
        ofs += self.h
        w2 = p[ofs : ofs + self.h]
        ofs += self.h
        b2 = p[ofs]
        return W1, b1, w2, b2

    @staticmethod
    def flatten(W1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float) -> np.ndarray:
        return np.concatenate([W1.ravel(), b1, w2, [b2]])


def init_network(
    d: int, seed: int = 0, symmetric_init: bool = False, standardizer=None
) -> MlpNetwork:
    """Fresh network with i.i.d. uniform weights.

    Default draws every weight and bias from uniform(0, 1). The
    symmetric option draws from uniform(-r, r) with r = 1/sqrt(fan-in),
    for runs where the all-positive init stalls tanh training.
    """
    h = hidden_size(d)
    rng = np.random.default_rng(seed)
    if symmetric_init:
        r1 = 1.0 / np.sqrt(d + 1)
        r2 = 1.0 / np.sqrt(h + 1)
        W1 = rng.uniform(-r1, r1, size=(h, d))
        b1 = rng.uniform(-r1, r1, size=h)
        w2 = rng.uniform(-r2, r2, size=h)
        b2 = rng.uniform(-r2, r2)
    else:
        W1 = rng.uniform(0.0, 1.0, size=(h, d))
        b1 = rng.uniform(0.0, 1.0, size=h)
        w2 = rng.uniform(0.0, 1.0, size=h)
        b2 = rng.uniform(0.0, 1.0)
    return MlpNetwork(
        d=d, h=h, params=MlpNetwork.flatten(W1, b1, w2, b2), standardizer=standardizer
    )


def forward(net: MlpNetwork, X: np.ndarray, params: np.ndarray | None = None) -> np.ndarray:
    """Network outputs for a batch; X shape (N, d)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != net.d:
        raise ValueError("dimension_mismatch")
    W1, b1, w2, b2 = net.unflatten(params)
    hidden = np.tanh(X @ W1.T + b1)
    return np.tanh(hidden @ w2 + b2)


def mse_loss(net: MlpNetwork, X: np.ndarray, y: np.ndarray, params: np.ndarray | None = None) -> float:
    out = forward(net, X, params)
    return float(np.mean((np.asarray(y, dtype=float) - out) ** 2))


def gradient(
    net: MlpNetwork, X: np.ndarray, y: np.ndarray, params: np.ndarray | None = None
) -> np.ndarray:
    """Exact gradient of the batch MSE w.r.t. the flat parameters."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    W1, b1, w2, b2 = net.unflatten(params)
    pre_h = X @ W1.T + b1
    hidden = np.tanh(pre_h)
    out = np.tanh(hidden @ w2 + b2)

    e = y - out
    n = len(y)
    # dL/d(pre-activation of output)
    g_out = (-2.0 / n) * e * (1.0 - out**2)
    grad_w2 = hidden.T @ g_out
    grad_b2 = g_out.sum()
    g_hidden = np.outer(g_out, w2) * (1.0 - hidden**2)
    grad_W1 = g_hidden.T @ X
    grad_b1 = g_hidden.sum(axis=0)
    return MlpNetwork.flatten(grad_W1, grad_b1, grad_w2, grad_b2)


def jacobian(
    net: MlpNetwork, X: np.ndarray, y: np.ndarray, params: np.ndarray | None = None
) -> np.ndarray:
    """N x W matrix of per-sample residual derivatives d(y_i - out_i)/d theta."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    W1, b1, w2, b2 = net.unflatten(params)
    pre_h = X @ W1.T + b1
    hidden = np.tanh(pre_h)
    out = np.tanh(hidden @ w2 + b2)

    # d out / d (output pre-activation)
    dout = 1.0 - out**2  # (N,)
    J_w2 = dout[:, None] * hidden  # (N, h)
    J_b2 = dout[:, None]  # (N, 1)
    g_hidden = (dout[:, None] * w2) * (1.0 - hidden**2)  # (N, h)
    J_W1 = g_hidden[:, :, None] * X[:, None, :]  # (N, h, d)
    J_out = np.concatenate(
        [J_W1.reshape(len(X), -1), g_hidden, J_w2, J_b2], axis=1
    )
    return -J_out  # residual e = y - out, so de/dtheta = -dout/dtheta


def residuals(net: MlpNetwork, X: np.ndarray, y: np.ndarray, params: np.ndarray | None = None) -> np.ndarray:
    return np.asarray(y, dtype=float) - forward(net, X, params)
