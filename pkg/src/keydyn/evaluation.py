"""Subject-grouped cross-validation, ROC/EER, and the impostor protocol.

Folds are assigned per subject (never per sample) and stratified by age
group, so a classifier is always tested on subjects it has never seen.
EER is read off the ROC at the crossing of type-1 (adult mislabeled
child) and type-2 (child mislabeled adult) error rates, with linear
interpolation between the bracketing thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from keydyn.algorithms import get_algorithm
from keydyn.classifiers import MissingClassError
from keydyn.dataset import Dataset, LabeledSample

ADULT_GROUPS = ("adult", "impostor")


class TooFewSubjectsError(ValueError):
    pass


class OneClassOnlyError(ValueError):
    pass


class OverlappingSubjectsError(ValueError):
    pass


def sample_label(sample: LabeledSample) -> int:
    """+1 for adult-side samples (impostors train as adults), -1 for child."""
    return 1 if sample.meta.age_group in ADULT_GROUPS else -1


def feature_matrix(samples: list[LabeledSample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([s.features.values for s in samples], dtype=float)
    y = np.array([sample_label(s) for s in samples])
    return X, y


def make_folds(d: Dataset, k: int = 5, seed: int = 0) -> dict[int, int]:
    """subject_id -> fold index, subject-disjoint and group-stratified."""
    if k < 2:
        raise TooFewSubjectsError("too_few_subjects: k must be at least 2")
    subjects = d.subjects()
    if len(subjects) < k:
        raise TooFewSubjectsError(
            f"too_few_subjects: {len(subjects)} subjects for {k} folds"
        )
    rng = np.random.default_rng(seed)
    assignment: dict[int, int] = {}
    groups: dict[str, list[int]] = {}
    for sid, group in sorted(subjects.items()):
        groups.setdefault(group, []).append(sid)
    for group_subjects in groups.values():
        order = rng.permutation(len(group_subjects))
        for i, idx in enumerate(order):
            assignment[group_subjects[idx]] = i % k
    return assignment


@dataclass(frozen=True)
class ScoredSample:
    sample: LabeledSample
    score: float
    label: int
    fold: int


@dataclass
class CvRun:
    scored: list[ScoredSample]
    converged: bool = True  # False when any fold's model failed to converge

    def score_label_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        scores = np.array([s.score for s in self.scored])
        labels = np.array([s.label for s in self.scored])
        return scores, labels


def cross_validate(
    d: Dataset,
    algo_name: str,
    folds: dict[int, int],
    seed: int = 0,
    options: dict | None = None,
    extra_train: list[LabeledSample] | None = None,
    extra_train_folds: dict[int, int] | None = None,
) -> CvRun:
    """Fit on k-1 folds, score the held-out fold, pool the results.

    ``extra_train`` samples (the impostor protocol's attack data) join
    the training side only, folded by ``extra_train_folds``. Per-fold
    model seeds derive from the master seed as seed + fold index.
    """
    algo = get_algorithm(algo_name)
    options = options or {}
    k = max(folds.values()) + 1
    scored: list[ScoredSample] = []
    converged = True
    for fold in range(k):
        train = [s for s in d.samples if folds[s.meta.subject_id] != fold]
        test = [s for s in d.samples if folds[s.meta.subject_id] == fold]
        if extra_train is not None:
            assert extra_train_folds is not None
            train = train + [
                s for s in extra_train if extra_train_folds[s.meta.subject_id] != fold
            ]
        if not test:
            continue
        X_train, y_train = feature_matrix(train)
        try:
            model = algo.fit(X_train, y_train, seed + fold, options)
        except MissingClassError:
            raise
        except Exception as exc:
            raise RuntimeError(f"fold {fold}: {exc}") from exc
        if not getattr(model, "converged", True):
            converged = False
        X_test, _ = feature_matrix(test)
        scores = model.score_many(X_test)
        scored.extend(
            ScoredSample(sample=s, score=float(v), label=sample_label(s), fold=fold)
            for s, v in zip(test, scores)
        )
    return CvRun(scored=scored, converged=converged)


@dataclass(frozen=True)
class RocCurve:
    """(threshold, type1, type2) triples, thresholds descending.

    type1(t) is the fraction of adults scoring below t (predicted
    child); type2(t) the fraction of children scoring at or above t.
    """

    points: tuple[tuple[float, float, float], ...]


def roc_curve(scores: np.ndarray, labels: np.ndarray) -> RocCurve:
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    adult = scores[labels > 0]
    child = scores[labels < 0]
    if len(adult) == 0 or len(child) == 0:
        raise OneClassOnlyError("one_class_only")
    thresholds = np.concatenate(([np.inf], np.unique(scores)[::-1], [-np.inf]))
    points = []
    for t in thresholds:
        type1 = float(np.mean(adult < t))
        type2 = float(np.mean(child >= t))
        points.append((float(t), type1, type2))
    return RocCurve(points=tuple(points))


def eer_with_threshold(roc: RocCurve) -> tuple[float, float]:
    """EER percent and its operating threshold.

    Walks thresholds from +inf downward; type1 falls 1 -> 0 while type2
    rises 0 -> 1, so type1 - type2 crosses zero exactly once. An exact
    crossing is returned as-is, otherwise both rates and the threshold
    are interpolated linearly between the bracketing points.
    """
    pts = roc.points
    for i, (t, e1, e2) in enumerate(pts):
        diff = e1 - e2
        if diff == 0.0:
            return 100.0 * e1, t
        if diff < 0.0:
            t_prev, p1, p2 = pts[i - 1]
            prev_diff = p1 - p2
            frac = prev_diff / (prev_diff - diff)
            eer = p1 + frac * (e1 - p1)
            if np.isfinite(t) and np.isfinite(t_prev):
                thr = t_prev + frac * (t - t_prev)
            else:
                thr = t if np.isfinite(t) else t_prev
            return 100.0 * eer, thr
    return 100.0 * pts[-1][1], pts[-1][0]


def compute_eer(scores: np.ndarray, labels: np.ndarray) -> float:
    return eer_with_threshold(roc_curve(scores, labels))[0]


def per_fold_average_eer(run: CvRun) -> float:
    """Mean of per-fold EERs, the alternative to pooled scoring."""
    folds = sorted({s.fold for s in run.scored})
    eers = []
    for fold in folds:
        sub = [s for s in run.scored if s.fold == fold]
        scores = np.array([s.score for s in sub])
        labels = np.array([s.label for s in sub])
        eers.append(compute_eer(scores, labels))
    return float(np.mean(eers))


@dataclass(frozen=True)
class ImpostorResult:
    eer_percent: float
    impostor_error_percent: float
    threshold: float
    converged: bool = True


def impostor_evaluate(
    genuine: Dataset,
    impostors: Dataset,
    algo_name: str,
    seed: int = 0,
    k: int = 5,
    options: dict | None = None,
) -> ImpostorResult:
    """Joint protocol: impostors train as adults, then attack the system.

    Both populations are folded subject-wise. Per fold the model trains
    on genuine-train plus impostor-train and scores both test sides. EER
    comes from the pooled genuine scores; the impostor error is the
    fraction of impostor test samples falling below that operating
    threshold (classified child).
    """
    genuine_subjects = set(genuine.subjects())
    impostor_subjects = set(impostors.subjects())
    if genuine_subjects & impostor_subjects:
        raise OverlappingSubjectsError(
            f"overlapping_subjects: {sorted(genuine_subjects & impostor_subjects)}"
        )
    folds_g = make_folds(genuine, k=k, seed=seed)
    folds_i = make_folds(impostors, k=k, seed=seed + 1)

    algo = get_algorithm(algo_name)
    options = options or {}
    genuine_scores: list[float] = []
    genuine_labels: list[int] = []
    impostor_scores: list[float] = []
    converged = True
    for fold in range(k):
        train = [s for s in genuine.samples if folds_g[s.meta.subject_id] != fold] + [
            s for s in impostors.samples if folds_i[s.meta.subject_id] != fold
        ]
        test_g = [s for s in genuine.samples if folds_g[s.meta.subject_id] == fold]
        test_i = [s for s in impostors.samples if folds_i[s.meta.subject_id] == fold]
        X_train, y_train = feature_matrix(train)
        model = algo.fit(X_train, y_train, seed + fold, options)
        if not getattr(model, "converged", True):
            converged = False
        if test_g:
            X_g, _ = feature_matrix(test_g)
            genuine_scores.extend(model.score_many(X_g).tolist())
            genuine_labels.extend(sample_label(s) for s in test_g)
        if test_i:
            X_i, _ = feature_matrix(test_i)
            impostor_scores.extend(model.score_many(X_i).tolist())

    eer, threshold = eer_with_threshold(
        roc_curve(np.array(genuine_scores), np.array(genuine_labels))
    )
    imp_err = 100.0 * float(np.mean(np.array(impostor_scores) < threshold))
    return ImpostorResult(
        eer_percent=eer,
        impostor_error_percent=imp_err,
        threshold=threshold,
        converged=converged,
    )
