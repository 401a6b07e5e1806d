"""Soft-margin SVM trained by sequential minimal optimization.

Solves the dual by Platt-style pairwise coordinate ascent with an error
cache and second-choice heuristic. Linear and Gaussian RBF kernels;
features are standardized before training by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from keydyn.classifiers import Standardizer, _check_classes


class SvmConvergenceError(RuntimeError):
    pass


def kernel_matrix(kernel: str, gamma: float | None, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    if kernel == "rbf":
        sq = (
            (A**2).sum(axis=1)[:, None]
            + (B**2).sum(axis=1)[None, :]
            - 2.0 * (A @ B.T)
        )
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {kernel!r}")


@dataclass(frozen=True)
class SvmModel:
    kernel: str
    gamma: float | None
    X: np.ndarray  # training inputs in model space (standardized if fitted so)
    alpha_y: np.ndarray  # alpha_i * y_i
    b: float
    standardizer: Standardizer | None
    converged: bool = True
    kkt_violation: float = 0.0
    objective_trace: tuple[float, ...] = field(default=())

    def score_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.X.shape[1]:
            raise ValueError("dimension_mismatch")
        if self.standardizer is not None:
            X = self.standardizer.apply(X)
        K = kernel_matrix(self.kernel, self.gamma, X, self.X)
        return K @ self.alpha_y + self.b


class _Smo:
    """One SMO solve over a precomputed kernel matrix."""

    def __init__(self, K: np.ndarray, y: np.ndarray, C: float, tol: float, rng: np.random.Generator):
        self.K = K
        self.y = y
        self.C = C
        self.tol = tol
        self.rng = rng
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        # error cache: f(x_i) - y_i, kept incrementally
        self.E = -y.astype(float)
        self.objective_trace: list[float] = []

    def dual_objective(self) -> float:
        ay = self.alpha * self.y
        return float(self.alpha.sum() - 0.5 * ay @ (self.K @ ay))

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        E1, E2 = self.E[i1], self.E[i2]
        s = y1 * y2
        if s > 0:
            L, H = max(0.0, a1 + a2 - self.C), min(self.C, a1 + a2)
        else:
            L, H = max(0.0, a2 - a1), min(self.C, self.C + a2 - a1)
        if L >= H:
            return False
        k11, k12, k22 = self.K[i1, i1], self.K[i1, i2], self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 1e-15:
            a2_new = a2 + y2 * (E1 - E2) / eta
            a2_new = min(max(a2_new, L), H)
        else:
            # flat direction: test both clip endpoints on the objective
            f1 = y1 * (E1 + self.b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (E2 + self.b) - s * a1 * k12 - a2 * k22
            L1 = a1 + s * (a2 - L)
            H1 = a1 + s * (a2 - H)
            obj_L = (
                L1 * f1 + L * f2 + 0.5 * L1**2 * k11 + 0.5 * L**2 * k22 + s * L * L1 * k12
            )
            obj_H = (
                H1 * f1 + H * f2 + 0.5 * H1**2 * k11 + 0.5 * H**2 * k22 + s * H * H1 * k12
            )
            if obj_L < obj_H - 1e-12:
                a2_new = L
            elif obj_L > obj_H + 1e-12:
                a2_new = H
            else:
                return False
        if abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b_old = self.b
        b1 = b_old - (E1 + d1 * k11 + d2 * k12)
        b2 = b_old - (E2 + d1 * k12 + d2 * k22)
        if 0.0 < a1_new < self.C:
            self.b = b1
        elif 0.0 < a2_new < self.C:
            self.b = b2
        else:
            self.b = 0.5 * (b1 + b2)

        self.E += d1 * self.K[i1] + d2 * self.K[i2] + (self.b - b_old)
        self.alpha[i1], self.alpha[i2] = a1_new, a2_new
        return True

    def _examine(self, i2: int) -> bool:
        y2, a2, E2 = self.y[i2], self.alpha[i2], self.E[i2]
        r2 = E2 * y2
        if not ((r2 < -self.tol and a2 < self.C) or (r2 > self.tol and a2 > 0.0)):
            return False
        non_bound = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))
        if len(non_bound) > 1:
            i1 = int(non_bound[np.argmax(np.abs(self.E[non_bound] - E2))])
            if self._take_step(i1, i2):
                return True
        if len(non_bound):
            start = self.rng.integers(len(non_bound))
            for i1 in np.roll(non_bound, -start):
                if self._take_step(int(i1), i2):
                    return True
        n = len(self.y)
        start = self.rng.integers(n)
        for i1 in range(n):
            if self._take_step((i1 + start) % n, i2):
                return True
        return False

    def solve(self, max_sweeps: int) -> bool:
        n = len(self.y)
        examine_all = True
        num_changed = 1
        sweeps = 0
        while num_changed > 0 or examine_all:
            if sweeps >= max_sweeps:
                return False
            sweeps += 1
            num_changed = 0
            if examine_all:
                indices = range(n)
            else:
                indices = np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))
            for i in indices:
                num_changed += int(self._examine(int(i)))
            self.objective_trace.append(self.dual_objective())
            if examine_all:
                examine_all = False
            elif num_changed == 0:
                examine_all = True
        return True

    def max_kkt_violation(self) -> float:
        yf = self.y * (self.E + self.y)  # y_i * f(x_i)
        v_zero = np.where(self.alpha <= 0.0, np.maximum(0.0, 1.0 - yf), 0.0)
        v_c = np.where(self.alpha >= self.C, np.maximum(0.0, yf - 1.0), 0.0)
        interior = (self.alpha > 0.0) & (self.alpha < self.C)
        v_mid = np.where(interior, np.abs(yf - 1.0), 0.0)
        return float(np.max(v_zero + v_c + v_mid))


def train_svm(
    X: np.ndarray,
    y: np.ndarray,
    kernel: str = "linear",
    C: float = 1.0,
    gamma: float | None = None,
    tol: float = 1e-3,
    max_sweeps: int = 1000,
    standardize: bool = True,
    seed: int = 0,
    raise_on_no_convergence: bool = False,
) -> SvmModel:
    """Fit a soft-margin SVM; higher decision values mean more adult-like.

    Non-convergence within ``max_sweeps`` outer SMO sweeps is reported
    via the model's ``converged`` flag (or raised when asked to).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_classes(y)
    standardizer = Standardizer.fit(X) if standardize else None
    Z = standardizer.apply(X) if standardizer is not None else X
    if kernel == "rbf" and gamma is None:
        gamma = 1.0 / Z.shape[1]

    K = kernel_matrix(kernel, gamma, Z, Z)
    smo = _Smo(K=K, y=y, C=C, tol=tol, rng=np.random.default_rng(seed))
    converged = smo.solve(max_sweeps=max_sweeps)
    if not converged and raise_on_no_convergence:
        raise SvmConvergenceError(f"no_convergence({max_sweeps})")
    return SvmModel(
        kernel=kernel,
        gamma=gamma,
        X=Z,
        alpha_y=smo.alpha * y,
        b=smo.b,
        standardizer=standardizer,
        converged=converged,
        kkt_violation=smo.max_kkt_violation(),
        objective_trace=tuple(smo.objective_trace),
    )
