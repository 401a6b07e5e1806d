"""Six full-batch backpropagation trainers for the MLP.

gda  gradient descent with adaptive learning rate
cgf  conjugate gradient with Fletcher-Reeves updates
bfg  BFGS quasi-Newton
oss  one-step secant (memoryless quasi-Newton)
scg  scaled conjugate gradient (Moller)
lm   Levenberg-Marquardt

cgf/bfg/oss use a backtracking Armijo line search; scg and lm manage
their own step sizes. Training stops at max_epochs, the MSE goal, or a
small gradient norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from keydyn.mlp import MlpNetwork, gradient, jacobian, mse_loss, residuals

OPTIMIZERS = ("gda", "cgf", "bfg", "oss", "scg", "lm")


class DivergedError(RuntimeError):
    def __init__(self, optimizer: str, epoch: int):
        super().__init__(f"diverged({optimizer}, epoch {epoch})")
        self.optimizer = optimizer
        self.epoch = epoch


class NotDescentError(ValueError):
    pass


class LineSearchFailedError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    optimizer: str = "scg"
    max_epochs: int = 500
    error_goal: float = 1e-3
    min_gradient_norm: float = 1e-6
    learning_rate: float = 0.01
    lr_inc: float = 1.05
    lr_dec: float = 0.7
    max_perf_inc: float = 1.04
    seed: int = 0

    def __post_init__(self) -> None:
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if min(self.max_epochs, self.error_goal, self.min_gradient_norm, self.learning_rate) <= 0:
            raise ValueError("all bounds must be positive")


def line_search(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    direction: np.ndarray,
    g0: np.ndarray,
    f0: float | None = None,
    c1: float = 1e-4,
    max_halvings: int = 40,
) -> tuple[float, np.ndarray, float]:
    """Backtracking Armijo search; returns (step, new point, new loss)."""
    slope = float(g0 @ direction)
    if slope >= 0.0:
        raise NotDescentError("not_descent")
    if f0 is None:
        f0 = f(x0)
    alpha = 1.0
    for _ in range(max_halvings + 1):
        x = x0 + alpha * direction
        fx = f(x)
        if math.isfinite(fx) and fx <= f0 + c1 * alpha * slope:
            return alpha, x, fx
        alpha *= 0.5
    raise LineSearchFailedError("search_failed")


def _check_finite(loss: float, optimizer: str, epoch: int) -> None:
    if not math.isfinite(loss):
        raise DivergedError(optimizer, epoch)


def _train_gda(f, grad, theta, cfg: TrainConfig) -> tuple[np.ndarray, list[float]]:
    lr = cfg.learning_rate
    loss = f(theta)
    trace = [loss]
    for epoch in range(cfg.max_epochs):
        g = grad(theta)
        if np.linalg.norm(g) < cfg.min_gradient_norm:
            break
        candidate = theta - lr * g
        new_loss = f(candidate)
        _check_finite(new_loss, "gda", epoch)
        if new_loss > cfg.max_perf_inc * loss:
            lr *= cfg.lr_dec  # step rejected
        else:
            if new_loss < loss:
                lr *= cfg.lr_inc
            theta, loss = candidate, new_loss
        trace.append(loss)
        if loss < cfg.error_goal:
            break
    return theta, trace


def _train_line_search_family(f, grad, theta, cfg: TrainConfig, kind: str):
    """cgf / bfg / oss share the Armijo-driven outer loop."""
    n = len(theta)
    g = grad(theta)
    loss = f(theta)
    trace = [loss]
    direction = -g
    H = np.eye(n) if kind == "bfg" else None

    for epoch in range(cfg.max_epochs):
        if np.linalg.norm(g) < cfg.min_gradient_norm or loss < cfg.error_goal:
            break
        if kind == "cgf" and epoch % n == 0:
            direction = -g
        if float(g @ direction) >= 0.0:
            direction = -g  # restart from steepest descent
            if kind == "bfg":
                H = np.eye(n)
        try:
            alpha, theta_new, new_loss = line_search(f, theta, direction, g, f0=loss)
        except LineSearchFailedError:
            if np.array_equal(direction, -g):
                break  # even steepest descent makes no progress
            direction = -g
            if kind == "bfg":
                H = np.eye(n)
            try:
                alpha, theta_new, new_loss = line_search(f, theta, direction, g, f0=loss)
            except LineSearchFailedError:
                break
        _check_finite(new_loss, kind, epoch)
        g_new = grad(theta_new)
        s = theta_new - theta
        yv = g_new - g

        if kind == "cgf":
            denom = float(g @ g)
            beta = float(g_new @ g_new) / denom if denom > 0 else 0.0
            direction = -g_new + beta * direction
        elif kind == "bfg":
            sy = float(s @ yv)
            if sy > 1e-12:
                rho = 1.0 / sy
                I = np.eye(n)
                V = I - rho * np.outer(s, yv)
                H = V @ H @ V.T + rho * np.outer(s, s)
            direction = -(H @ g_new)
        else:  # oss
            sy = float(s @ yv)
            if abs(sy) > 1e-12:
                a_coef = -(1.0 + float(yv @ yv) / sy) * float(s @ g_new) / sy + float(
                    yv @ g_new
                ) / sy
                b_coef = float(s @ g_new) / sy
                direction = -g_new + a_coef * s + b_coef * yv
            else:
                direction = -g_new
        theta, g, loss = theta_new, g_new, new_loss
        trace.append(loss)
    return theta, trace


def _train_scg(f, grad, theta, cfg: TrainConfig):
    """Moller's scaled conjugate gradient; no line search."""
    sigma = 1e-5
    lam = 1e-6
    lam_bar = 0.0
    n = len(theta)

    g = grad(theta)
    r = -g
    p = r.copy()
    loss = f(theta)
    trace = [loss]
    success = True
    delta = 0.0

    for epoch in range(cfg.max_epochs):
        norm_r = np.linalg.norm(r)
        if norm_r < cfg.min_gradient_norm or loss < cfg.error_goal:
            break
        p_sq = float(p @ p)
        if p_sq == 0.0:
            break
        if success:
            sigma_k = sigma / math.sqrt(p_sq)
            s = (grad(theta + sigma_k * p) - (-r)) / sigma_k
            delta = float(p @ s)
        delta += (lam - lam_bar) * p_sq
        if delta <= 0.0:  # make the local Hessian model positive definite
            lam_bar = 2.0 * (lam - delta / p_sq)
            delta = -delta + lam * p_sq
            lam = lam_bar
        mu = float(p @ r)
        alpha = mu / delta
        new_loss = f(theta + alpha * p)
        _check_finite(new_loss, "scg", epoch)
        cmp = 2.0 * delta * (loss - new_loss) / (mu * mu) if mu != 0.0 else -1.0
        if cmp >= 0.0:  # accept the step
            theta = theta + alpha * p
            loss = new_loss
            r_new = -grad(theta)
            lam_bar = 0.0
            success = True
            if (epoch + 1) % n == 0:
                p = r_new.copy()
            else:
                beta = (float(r_new @ r_new) - float(r_new @ r)) / mu
                p = r_new + beta * p
            r = r_new
            if cmp >= 0.75:
                lam = max(lam * 0.25, 1e-15)
            trace.append(loss)
        else:
            lam_bar = lam
            success = False
        if cmp < 0.25:
            lam += delta * (1.0 - cmp) / p_sq
        if lam > 1e20:
            break
    return theta, trace


def _train_lm(net: MlpNetwork, X, y, theta, cfg: TrainConfig):
    mu = 1e-3
    n = len(y)
    loss = mse_loss(net, X, y, theta)
    trace = [loss]
    identity = np.eye(len(theta))
    for epoch in range(cfg.max_epochs):
        e = residuals(net, X, y, theta)
        J = jacobian(net, X, y, theta)
        g = (2.0 / n) * (J.T @ e)
        if np.linalg.norm(g) < cfg.min_gradient_norm or loss < cfg.error_goal:
            break
        accepted = False
        while mu <= 1e10:
            try:
                delta = np.linalg.solve(J.T @ J + mu * identity, J.T @ e)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            candidate = theta - delta
            new_loss = mse_loss(net, X, y, candidate)
            _check_finite(new_loss, "lm", epoch)
            if new_loss < loss:
                theta, loss = candidate, new_loss
                mu = max(mu / 10.0, 1e-20)
                accepted = True
                trace.append(loss)
                break
            mu *= 10.0
        if not accepted:
            break  # damping exhausted
    return theta, trace


def train_mlp(net: MlpNetwork, X: np.ndarray, y: np.ndarray, cfg: TrainConfig) -> MlpNetwork:
    """Optimize the network's MSE in place; records the loss trace."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if len(set(np.sign(y))) < 2:
        raise ValueError("training batch needs both classes")

    def f(params: np.ndarray) -> float:
        return mse_loss(net, X, y, params)

    def grad(params: np.ndarray) -> np.ndarray:
        return gradient(net, X, y, params)

    theta = net.params.copy()
    if cfg.optimizer == "gda":
        theta, trace = _train_gda(f, grad, theta, cfg)
    elif cfg.optimizer in ("cgf", "bfg", "oss"):
        theta, trace = _train_line_search_family(f, grad, theta, cfg, cfg.optimizer)
    elif cfg.optimizer == "scg":
        theta, trace = _train_scg(f, grad, theta, cfg)
    else:
        theta, trace = _train_lm(net, X, y, theta, cfg)

    net.params = theta
    net.loss_trace = trace
    return net
