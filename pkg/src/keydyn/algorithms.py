"""Registry of the thirteen age-group classifiers.

Each entry builds a fitted model from a raw-microsecond feature matrix
and +1/-1 labels; every model exposes score_many() with the uniform
orientation higher = more adult-like.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from keydyn.classifiers import Standardizer, train_knn, train_lda, train_prototype
from keydyn.mlp import MlpNetwork, forward, init_network
from keydyn.optimizers import TrainConfig, train_mlp
from keydyn.svm import train_svm


@dataclass
class MlpClassifier:
    """Standardize-then-MLP wrapper so networks plug into evaluation."""

    net: MlpNetwork
    standardizer: Standardizer

    @property
    def converged(self) -> bool:
        return self.net.converged

    def score_many(self, X: np.ndarray) -> np.ndarray:
        return forward(self.net, self.standardizer.apply(X))


def _fit_mlp(optimizer: str, X, y, seed: int, options: dict) -> MlpClassifier:
    standardizer = Standardizer.fit(X)
    Z = standardizer.apply(X)
    cfg = TrainConfig(
        optimizer=optimizer,
        max_epochs=int(options.get("max_epochs", 500)),
        error_goal=float(options.get("error_goal", 1e-3)),
        min_gradient_norm=float(options.get("min_gradient_norm", 1e-6)),
        learning_rate=float(options.get("learning_rate", 0.01)),
        seed=seed,
    )
    net = init_network(
        Z.shape[1], seed=seed, symmetric_init=bool(options.get("symmetric_init", False))
    )
    train_mlp(net, Z, np.asarray(y, dtype=float), cfg)
    return MlpClassifier(net=net, standardizer=standardizer)


@dataclass(frozen=True)
class Algorithm:
    name: str
    display_name: str
    fit: Callable  # (X, y, seed, options) -> model with score_many()


def _prototype(metric: str):
    return lambda X, y, seed, options: train_prototype(X, y, metric)


_REGISTRY: list[Algorithm] = [
    Algorithm("speed", "Speed (Total time)", _prototype("speed")),
    Algorithm("euclidean", "Euclidean distance", _prototype("sqeuclidean")),
    Algorithm("manhattan", "Manhattan distance", _prototype("manhattan")),
    Algorithm(
        "knn",
        "Nearest neighbor",
        lambda X, y, seed, options: train_knn(X, y, k=int(options.get("k", 3))),
    ),
    Algorithm(
        "lda",
        "Linear discriminant analysis",
        lambda X, y, seed, options: train_lda(
            X, y, shrinkage=float(options.get("shrinkage", 1e-3))
        ),
    ),
    Algorithm(
        "svm-linear",
        "Support vector machine (Linear)",
        lambda X, y, seed, options: train_svm(
            X, y, kernel="linear", C=float(options.get("C", 1.0)), seed=seed
        ),
    ),
    Algorithm(
        "svm-rbf",
        "Support vector machine (RBF)",
        lambda X, y, seed, options: train_svm(
            X,
            y,
            kernel="rbf",
            C=float(options.get("C", 1.0)),
            gamma=options.get("gamma"),
            seed=seed,
        ),
    ),
    Algorithm("mlp-gda", "Gradient descent bp.", lambda X, y, seed, options: _fit_mlp("gda", X, y, seed, options)),
    Algorithm("mlp-cgf", "Conjugate gr. bp. with FR updates", lambda X, y, seed, options: _fit_mlp("cgf", X, y, seed, options)),
    Algorithm("mlp-bfg", "BFGS quasi-Newton bp.", lambda X, y, seed, options: _fit_mlp("bfg", X, y, seed, options)),
    Algorithm("mlp-oss", "One step secant bp.", lambda X, y, seed, options: _fit_mlp("oss", X, y, seed, options)),
    Algorithm("mlp-scg", "Scaled conjugate gradient bp.", lambda X, y, seed, options: _fit_mlp("scg", X, y, seed, options)),
    Algorithm("mlp-lm", "Levenberg-Marquardt bp.", lambda X, y, seed, options: _fit_mlp("lm", X, y, seed, options)),
]

ALGORITHMS: dict[str, Algorithm] = {a.name: a for a in _REGISTRY}
ALGORITHM_ORDER: tuple[str, ...] = tuple(a.name for a in _REGISTRY)


def get_algorithm(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHM_ORDER)}"
        ) from None
