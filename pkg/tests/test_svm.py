import numpy as np
import pytest

from keydyn.svm import train_svm


def test_two_point_max_margin():
    # analytic solution for x=-1 (child), x=+1 (adult): f(x) = x
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    m = train_svm(X, y, kernel="linear", C=1000.0, standardize=False)
    probe = np.array([[-1.0], [0.0], [1.0], [2.0]])
    assert np.allclose(m.score_many(probe).ravel(), probe.ravel(), atol=1e-3)


def test_xor_with_rbf_kernel():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([1.0, 1.0, -1.0, -1.0])
    m = train_svm(X, y, kernel="rbf", gamma=1.0, C=1000.0, standardize=False)
    assert np.all(np.sign(m.score_many(X)) == y)


def test_duplicated_training_set_same_decision(rng):
    # invariance needs every alpha strictly inside the box, so use a
    # separable instance where the hard-margin solution is interior to C
    X = rng.normal(size=(30, 3))
    y = np.array([1.0] * 15 + [-1.0] * 15)
    X[y == 1] += 4.0
    probe = rng.normal(size=(20, 3))
    m1 = train_svm(X, y, kernel="linear", C=100.0, tol=1e-6, max_sweeps=5000)
    m2 = train_svm(
        np.vstack([X, X]), np.concatenate([y, y]), kernel="linear", C=100.0,
        tol=1e-6, max_sweeps=5000,
    )
    scale = max(1.0, np.max(np.abs(m1.score_many(probe))))
    assert np.max(np.abs(m1.score_many(probe) - m2.score_many(probe))) <= 1e-5 * scale


def test_dual_objective_non_decreasing(rng):
    X = rng.normal(size=(60, 4))
    y = np.array([1.0] * 30 + [-1.0] * 30)
    X[y == 1] += 0.7  # overlapping classes keep SMO busy
    m = train_svm(X, y, kernel="rbf")
    trace = np.array(m.objective_trace)
    assert len(trace) >= 2
    assert np.all(np.diff(trace) >= -1e-9)


def test_kkt_satisfied_at_convergence(rng):
    X = rng.normal(size=(50, 5))
    y = np.array([1.0] * 25 + [-1.0] * 25)
    X[y == 1] += 1.0
    m = train_svm(X, y, kernel="linear", tol=1e-3)
    assert m.converged
    assert m.kkt_violation <= 1e-3


def test_label_swap_negates_scores(rng):
    X = rng.normal(size=(40, 3))
    y = np.array([1.0] * 20 + [-1.0] * 20)
    X[y == 1] += 1.2
    probe = rng.normal(size=(10, 3))
    s = train_svm(X, y).score_many(probe)
    s_swapped = train_svm(X, -y).score_many(probe)
    assert np.max(np.abs(s + s_swapped)) <= 1e-3


def test_non_convergence_reported():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(40, 2))
    y = np.array([1.0] * 20 + [-1.0] * 20)
    m = train_svm(X, y, kernel="rbf", max_sweeps=1)
    assert not m.converged


def test_missing_class_rejected():
    from keydyn.classifiers import MissingClassError

    with pytest.raises(MissingClassError):
        train_svm(np.array([[1.0], [2.0]]), np.array([1.0, 1.0]))
