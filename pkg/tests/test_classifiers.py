import numpy as np
import pytest

from keydyn.classifiers import (
    MissingClassError,
    Standardizer,
    train_knn,
    train_lda,
    train_prototype,
)


def test_standardizer_midpoint_maps_to_origin():
    std = Standardizer.fit(np.array([[0.0, 0.0], [2.0, 2.0]]))
    assert np.allclose(std.mean, [1.0, 1.0])
    assert np.allclose(std.apply(np.array([[1.0, 1.0]])), 0.0)


def test_standardizer_constant_column_flagged():
    X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    std = Standardizer.fit(X)
    assert std.constant_mask.tolist() == [False, True]
    assert np.allclose(std.apply(X)[:, 1], 0.0)  # shifted but unscaled


def test_standardizer_moments(rng):
    X = rng.normal(size=(200, 7)) * 50 + 13
    std = Standardizer.fit(X)
    Z = std.apply(X)
    assert np.max(np.abs(Z.mean(axis=0))) < 1e-9
    assert np.max(np.abs(Z.var(axis=0) - 1.0)) < 1e-9


def test_prototype_means_stored_verbatim():
    X = np.array([[2.0, 2.0], [0.0, 0.0]])
    y = np.array([1, -1])
    m = train_prototype(X, y, "sqeuclidean")
    assert np.allclose(m.mu_adult, [2, 2])
    assert np.allclose(m.mu_child, [0, 0])
    m2 = train_prototype(np.array([[1.0, 1.0], [3.0, 3.0], [0.0, 0.0]]), np.array([1, 1, -1]), "speed")
    assert np.allclose(m2.mu_adult, [2, 2])


def test_prototype_means_match_bruteforce(rng):
    X = rng.normal(size=(40, 5))
    y = rng.choice([1, -1], size=40)
    if abs(y.sum()) == 40:
        y[0] = -y[0]
    m = train_prototype(X, y, "manhattan")
    assert np.allclose(m.mu_adult, np.mean([x for x, l in zip(X, y) if l == 1], axis=0))
    assert np.allclose(m.mu_child, np.mean([x for x, l in zip(X, y) if l == -1], axis=0))


def test_sqeuclidean_score_example():
    m = train_prototype(np.array([[2.0, 2.0], [0.0, 0.0]]), np.array([1, -1]), "sqeuclidean")
    s = m.score_many(np.array([[1.5, 1.5]]))[0]
    assert s == pytest.approx(4.5 - 0.5)
    tie = m.score_many(np.array([[1.0, 1.0]]))[0]
    assert tie == pytest.approx(0.0)


def test_prototype_missing_class():
    with pytest.raises(MissingClassError):
        train_prototype(np.array([[1.0], [2.0]]), np.array([1, 1]), "speed")


@pytest.mark.parametrize("metric", ["speed", "sqeuclidean", "manhattan"])
def test_prototype_translation_invariance(metric, rng):
    X = rng.normal(size=(30, 6)) * 100
    y = np.array([1] * 15 + [-1] * 15)
    T = rng.normal(size=6) * 50
    probe = rng.normal(size=(10, 6)) * 100
    s0 = train_prototype(X, y, metric).score_many(probe)
    s1 = train_prototype(X + T, y, metric).score_many(probe + T)
    assert np.allclose(s0, s1)


@pytest.mark.parametrize("metric", ["speed", "sqeuclidean", "manhattan"])
def test_prototype_label_swap_negates_scores(metric, rng):
    X = rng.normal(size=(30, 4))
    y = np.array([1] * 15 + [-1] * 15)
    probe = rng.normal(size=(8, 4))
    s = train_prototype(X, y, metric).score_many(probe)
    s_swapped = train_prototype(X, -y, metric).score_many(probe)
    assert np.max(np.abs(s + s_swapped)) <= 1e-9


def test_knn_sign_matches_majority_vote(rng):
    for _ in range(50):
        X = rng.normal(size=(12, 3))
        y = rng.choice([1.0, -1.0], size=12)
        if abs(y.sum()) == 12:
            y[0] = -y[0]
        model = train_knn(X, y, k=3)
        probe = rng.normal(size=(5, 3))
        scores = model.score_many(probe)
        for x, s in zip(probe, scores):
            d = np.linalg.norm(X - x, axis=1)
            vote = np.sum(y[np.argsort(d)[:3]])
            if vote != 0:  # distinct majority
                assert np.sign(s) == np.sign(vote)


def test_knn_duplicate_points_no_blowup():
    X = np.array([[0.0], [0.0], [0.0], [5.0]])
    y = np.array([1.0, 1.0, -1.0, -1.0])
    s = train_knn(X, y, k=3).score_many(np.array([[0.0]]))[0]
    assert np.isfinite(s)
    assert s > 0  # 2 adult votes vs 1 child at equal distance


def lda_closed_form_oracle(X, y):
    """Textbook Fisher direction: inv(pooled within-class cov) @ mean gap."""
    Xa, Xc = X[y == 1], X[y == -1]
    mu_a, mu_c = Xa.mean(axis=0), Xc.mean(axis=0)
    Sw = np.cov(Xa.T, bias=False) * (len(Xa) - 1) + np.cov(Xc.T, bias=False) * (len(Xc) - 1)
    pooled = Sw / (len(Xa) + len(Xc) - 2)
    return np.linalg.inv(pooled) @ (mu_a - mu_c)


def test_lda_spherical_classes_axis():
    rng = np.random.default_rng(0)
    Xa = rng.normal([4.0, 0.0], 1.0, size=(200, 2))
    Xc = rng.normal([0.0, 0.0], 1.0, size=(200, 2))
    X = np.vstack([Xa, Xc])
    y = np.array([1] * 200 + [-1] * 200)
    m = train_lda(X, y, shrinkage=0.0, standardize=False)
    w = m.w / np.linalg.norm(m.w)
    assert abs(w[0]) > 0.99
    midpoint = (Xa.mean(axis=0) + Xc.mean(axis=0)) / 2
    assert m.score_many(midpoint[None, :])[0] == pytest.approx(0.0, abs=1e-9)


def test_lda_matches_closed_form(rng):
    for _ in range(50):
        Xa = rng.normal([1.0, 0.5], [1.0, 2.0], size=(20, 2))
        Xc = rng.normal([-1.0, -0.5], [1.5, 1.0], size=(25, 2))
        X = np.vstack([Xa, Xc])
        y = np.array([1] * 20 + [-1] * 25)
        m = train_lda(X, y, shrinkage=0.0, standardize=False)
        w_ref = lda_closed_form_oracle(X, y)
        assert np.max(np.abs(m.w - w_ref)) / np.max(np.abs(w_ref)) <= 1e-8


def test_lda_equal_means_degenerate():
    X = np.array([[0.0, 1.0], [0.0, -1.0], [0.0, 1.0], [0.0, -1.0]]) + np.array(
        [[0.1, 0], [-0.1, 0], [0.1, 0], [-0.1, 0]]
    )
    y = np.array([1, 1, -1, -1])
    m = train_lda(X, y, standardize=False)
    assert m.degenerate


def test_lda_label_swap_negates_scores(rng):
    X = rng.normal(size=(40, 5))
    y = np.array([1] * 20 + [-1] * 20)
    probe = rng.normal(size=(10, 5))
    s = train_lda(X, y).score_many(probe)
    s_swapped = train_lda(X, -y).score_many(probe)
    assert np.max(np.abs(s + s_swapped)) <= 1e-9


def test_lda_affine_invariance(rng):
    # invertible affine map applied to train and test, shrinkage off
    X = rng.normal(size=(60, 3))
    y = np.array([1] * 30 + [-1] * 30)
    X[y == 1] += 2.0
    probe = rng.normal(size=(10, 3))
    A = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    b = rng.normal(size=3)
    s0 = train_lda(X, y, shrinkage=0.0, standardize=False).score_many(probe)
    s1 = train_lda(X @ A.T + b, y, shrinkage=0.0, standardize=False).score_many(probe @ A.T + b)
    assert np.max(np.abs(s0 - s1)) <= 1e-6 * max(1.0, np.max(np.abs(s0)))
