import numpy as np
import pytest

from keydyn.mlp import forward, init_network, mse_loss
from keydyn.optimizers import (
    OPTIMIZERS,
    LineSearchFailedError,
    NotDescentError,
    TrainConfig,
    line_search,
    train_mlp,
)


def blobs(rng, n=40, spread=0.3):
    X = np.vstack(
        [
            rng.normal([2.0, 2.0], spread, size=(n // 2, 2)),
            rng.normal([-2.0, -2.0], spread, size=(n // 2, 2)),
        ]
    )
    y = np.array([1.0] * (n // 2) + [-1.0] * (n // 2))
    return X, y


def test_line_search_on_quadratic():
    f = lambda x: float(x @ x)
    x0 = np.array([1.0])
    alpha, x, fx = line_search(f, x0, np.array([-2.0]), np.array([2.0]))
    assert fx < f(x0)
    assert fx <= f(x0) + 1e-4 * alpha * (2.0 * -2.0)


def test_line_search_rejects_ascent():
    f = lambda x: float(x @ x)
    with pytest.raises(NotDescentError):
        line_search(f, np.array([1.0]), np.array([2.0]), np.array([2.0]))


def test_line_search_armijo_on_random_quadratics(rng):
    for _ in range(20):
        n = int(rng.integers(2, 6))
        A = rng.normal(size=(n, n))
        Q = A @ A.T + n * np.eye(n)
        b = rng.normal(size=n)
        f = lambda x: float(0.5 * x @ Q @ x + b @ x)
        x0 = rng.normal(size=n)
        g0 = Q @ x0 + b
        d = -g0
        alpha, x, fx = line_search(f, x0, d, g0)
        assert fx <= f(x0) + 1e-4 * alpha * float(g0 @ d) + 1e-12


def test_line_search_gives_up():
    # function that increases in every direction from x0 with huge slope lie
    f = lambda x: float(np.sum(x**2)) + 10.0 * float(np.any(x != 1.0))
    with pytest.raises(LineSearchFailedError):
        line_search(f, np.array([1.0]), np.array([-1.0]), np.array([1.0]))


@pytest.mark.parametrize("optimizer", OPTIMIZERS)
def test_all_optimizers_learn_separable_blobs(optimizer, rng):
    X, y = blobs(rng)
    net = init_network(2, seed=11, symmetric_init=True)
    cfg = TrainConfig(optimizer=optimizer, max_epochs=500, error_goal=1e-3)
    train_mlp(net, X, y, cfg)
    assert net.loss_trace[-1] < 0.05
    assert np.all(np.sign(forward(net, X)) == y)


def test_lm_accepted_losses_non_increasing(rng):
    X, y = blobs(rng, n=30, spread=0.8)
    net = init_network(2, seed=3, symmetric_init=True)
    train_mlp(net, X, y, TrainConfig(optimizer="lm", max_epochs=100))
    trace = np.array(net.loss_trace)
    assert np.all(np.diff(trace) <= 0.0)


def test_gda_with_adaptation_disabled_is_vanilla_gradient_descent(rng):
    X, y = blobs(rng, n=20)
    from keydyn.mlp import gradient

    net = init_network(2, seed=5, symmetric_init=True)
    reference = net.params.copy()
    lr = 0.01
    for _ in range(10):
        reference = reference - lr * gradient(net, X, y, reference)

    cfg = TrainConfig(
        optimizer="gda",
        max_epochs=10,
        learning_rate=lr,
        lr_inc=1.0,
        lr_dec=1.0,
        max_perf_inc=np.inf,
        error_goal=1e-12,
        min_gradient_norm=1e-15,
    )
    trained = init_network(2, seed=5, symmetric_init=True)
    train_mlp(trained, X, y, cfg)
    assert np.allclose(trained.params, reference, atol=1e-12)


def test_training_deterministic_under_fixed_seed(rng):
    X, y = blobs(rng)
    runs = []
    for _ in range(2):
        net = init_network(2, seed=8, symmetric_init=True)
        train_mlp(net, X, y, TrainConfig(optimizer="scg", max_epochs=50))
        runs.append(net.params.copy())
    assert np.array_equal(runs[0], runs[1])


def test_unknown_optimizer_rejected():
    with pytest.raises(ValueError):
        TrainConfig(optimizer="adam")


def test_single_class_batch_rejected(rng):
    net = init_network(2, seed=0)
    with pytest.raises(ValueError):
        train_mlp(net, rng.normal(size=(5, 2)), np.ones(5), TrainConfig(optimizer="gda"))


def test_bfgs_inverse_hessian_stays_symmetric_pd(rng):
    # re-run the BFGS update sequence on a quadratic and probe H
    n = 4
    A = rng.normal(size=(n, n))
    Q = A @ A.T + n * np.eye(n)
    b = rng.normal(size=n)
    f = lambda x: float(0.5 * x @ Q @ x + b @ x)
    grad = lambda x: Q @ x + b
    x = rng.normal(size=n)
    H = np.eye(n)
    g = grad(x)
    for _ in range(15):
        d = -(H @ g)
        if g @ d >= 0:
            d = -g
        alpha, x_new, _ = line_search(f, x, d, g, f0=f(x))
        g_new = grad(x_new)
        s, yv = x_new - x, g_new - g
        sy = float(s @ yv)
        if sy > 1e-12:
            rho = 1.0 / sy
            V = np.eye(n) - rho * np.outer(s, yv)
            H = V @ H @ V.T + rho * np.outer(s, s)
        x, g = x_new, g_new
        assert np.max(np.abs(H - H.T)) <= 1e-10
        for _ in range(5):
            v = rng.normal(size=n)
            assert v @ H @ v > 0
