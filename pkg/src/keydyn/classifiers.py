"""Non-neural classifiers: prototype distances, 3-NN, and LDA.

Every model exposes a real-valued adult-likeness score; higher means
more adult-like, and the predicted label is adult iff score >= 0.
Prototype and nearest-neighbor models work on raw microsecond features;
LDA (and the SVMs in keydyn.svm) standardize first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ADULT = 1
CHILD = -1


class MissingClassError(ValueError):
    pass


def _check_classes(y: np.ndarray, min_per_class: int = 1) -> None:
    if np.sum(y == ADULT) < min_per_class or np.sum(y == CHILD) < min_per_class:
        raise MissingClassError(
            f"training set needs at least {min_per_class} sample(s) per class"
        )


@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-scoring fitted on a training fold only.

    Zero-variance features pass through unscaled and are flagged in
    ``constant_mask``.
    """

    mean: np.ndarray
    std: np.ndarray
    constant_mask: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        if X.size == 0:
            raise ValueError("cannot fit standardizer on empty data")
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        constant = std == 0.0
        std = np.where(constant, 1.0, std)
        return cls(mean=mean, std=std, constant_mask=constant)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.std


@dataclass(frozen=True)
class PrototypeModel:
    """Mean-vector classifier under one of three distance notions.

    metric "speed" compares total times (sums of elements), "sqeuclidean"
    and "manhattan" compare full vectors to the class means.
    """

    metric: str
    mu_adult: np.ndarray
    mu_child: np.ndarray

    def score_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.mu_adult.shape[0]:
            raise ValueError("dimension_mismatch")
        if self.metric == "speed":
            totals = X.sum(axis=1)
            return np.abs(totals - self.mu_child.sum()) - np.abs(
                totals - self.mu_adult.sum()
            )
        if self.metric == "sqeuclidean":
            d_adult = ((X - self.mu_adult) ** 2).sum(axis=1)
            d_child = ((X - self.mu_child) ** 2).sum(axis=1)
        elif self.metric == "manhattan":
            d_adult = np.abs(X - self.mu_adult).sum(axis=1)
            d_child = np.abs(X - self.mu_child).sum(axis=1)
        else:
            raise ValueError(f"unknown metric {self.metric!r}")
        return d_child - d_adult


def train_prototype(X: np.ndarray, y: np.ndarray, metric: str) -> PrototypeModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    _check_classes(y)
    return PrototypeModel(
        metric=metric,
        mu_adult=X[y == ADULT].mean(axis=0),
        mu_child=X[y == CHILD].mean(axis=0),
    )


@dataclass(frozen=True)
class KnnModel:
    """3-nearest-neighbor with a continuous, vote-preserving score.

    The plain k=3 vote has only four levels, useless for ROC sweeping,
    so the score is vote + squashed inverse-distance refinement: the
    refinement term sum(y_i / (d_i + eps)) is squashed into (-1, 1) so
    the sign at threshold 0 always equals the majority vote. epsilon
    (1 microsecond) guards against zero distances on duplicate points.
    """

    X: np.ndarray
    y: np.ndarray
    k: int = 3
    eps: float = 1.0

    def score_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.X.shape[1]:
            raise ValueError("dimension_mismatch")
        scores = np.empty(X.shape[0])
        for i, x in enumerate(X):
            d = np.sqrt(((self.X - x) ** 2).sum(axis=1))
            nearest = np.argsort(d, kind="stable")[: self.k]
            vote = float(np.sum(self.y[nearest]))
            weighted = float(np.sum(self.y[nearest] / (d[nearest] + self.eps)))
            scores[i] = vote + weighted / (1.0 + abs(weighted))
        return scores


def train_knn(X: np.ndarray, y: np.ndarray, k: int = 3) -> KnnModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_classes(y)
    if len(y) < k:
        raise ValueError(f"need at least {k} training samples")
    return KnnModel(X=X, y=y, k=k)


@dataclass(frozen=True)
class LdaModel:
    w: np.ndarray
    b: float
    standardizer: Standardizer | None
    degenerate: bool = False

    def score_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.w.shape[0]:
            raise ValueError("dimension_mismatch")
        if self.standardizer is not None:
            X = self.standardizer.apply(X)
        return X @ self.w + self.b


def train_lda(
    X: np.ndarray,
    y: np.ndarray,
    shrinkage: float = 1e-3,
    standardize: bool = True,
) -> LdaModel:
    """Fisher discriminant with pooled within-class covariance.

    w = (S + lambda I)^-1 (mu_adult - mu_child), with S the pooled
    covariance and lambda = shrinkage * trace(S)/d; the bias places the
    class-mean midpoint at score 0.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    _check_classes(y, min_per_class=2)

    standardizer = Standardizer.fit(X) if standardize else None
    Z = standardizer.apply(X) if standardizer is not None else X

    Za, Zc = Z[y == ADULT], Z[y == CHILD]
    mu_a, mu_c = Za.mean(axis=0), Zc.mean(axis=0)
    d = Z.shape[1]
    scatter = (Za - mu_a).T @ (Za - mu_a) + (Zc - mu_c).T @ (Zc - mu_c)
    pooled = scatter / (len(Za) + len(Zc) - 2)
    lam = shrinkage * np.trace(pooled) / d if shrinkage > 0 else 0.0
    try:
        w = np.linalg.solve(pooled + lam * np.eye(d), mu_a - mu_c)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular_covariance: {exc}") from exc
    midpoint = (mu_a + mu_c) / 2.0
    degenerate = bool(np.allclose(mu_a, mu_c))
    return LdaModel(
        w=w, b=float(-w @ midpoint), standardizer=standardizer, degenerate=degenerate
    )
