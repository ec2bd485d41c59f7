import math

import numpy as np
import pytest

import mmdnet


def test_kernel_values():
    assert mmdnet.kernel([0.0], [1.0]) == pytest.approx(math.exp(-0.5), abs=1e-15)
    assert mmdnet.kernel([1.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)
    assert mmdnet.kernel([0.0], [2.0], family="laplacian") == pytest.approx(
        math.exp(-2.0), abs=1e-15
    )


def test_gram_shape_and_diagonal():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 3))
    g = np.asarray(mmdnet.gram(a, a))
    assert g.shape == (6, 6)
    assert np.allclose(np.diag(g), 1.0)
    assert np.allclose(g, g.T)


def test_mmd_hand_value():
    x = [[0.0], [1.0]]
    assert mmdnet.mmd_u2(x, x) == pytest.approx(math.exp(-0.5) - 1.0, abs=1e-15)


def test_mmd_unbiased_sign_and_symmetry():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(40, 2))
    y = rng.normal(size=(30, 2))
    assert mmdnet.mmd_u2(x, y) == mmdnet.mmd_u2(y, x)


def test_population_oracle():
    assert mmdnet.population_mmd_gaussian(0.0, 1.0, 0.0, 1.0, 3) == 0.0
    assert mmdnet.population_mmd_gaussian(0.0, 1.0, 2.0, 1.0, 1) > 0.0


def test_median_heuristic():
    pts = [[0.0], [1.0], [3.0]]
    assert mmdnet.median_heuristic(pts, seed=0) == pytest.approx(2.0)


def test_epsilon_bound_hand_value():
    got = mmdnet.epsilon_bound(
        p1=1, gamma1=1.0, p2=1, gamma2=1.0, delta=2.0 * math.exp(-1.0), m=100
    )
    assert got == pytest.approx(0.1 + 1.0 / math.sqrt(99.0) + 1.2, abs=1e-12)


def test_bounds_misc():
    assert mmdnet.theorem3_tail(4.0, 16) == pytest.approx(2.0 * math.exp(-16.0))
    eps = mmdnet.finite_theta_epsilon(25, 0.05, 400)
    assert mmdnet.finite_theta_failure_prob(25, eps / 2.0, 400) == pytest.approx(
        0.05, abs=1e-12
    )


def test_affine_generator_and_checkpoint(tmp_path):
    gen = mmdnet.make_affine([2.5], [0.1])
    out = np.asarray(gen.forward([[1.0], [-1.0]]))
    assert out[0, 0] == pytest.approx(2.6)
    assert out[1, 0] == pytest.approx(2.4)

    path = tmp_path / "gen.bin"
    gen.save(str(path))
    back = mmdnet.load_checkpoint(str(path))
    assert np.allclose(np.asarray(back.forward([[1.0]])), np.asarray(gen.forward([[1.0]])))


def test_mlp_generator_shapes():
    gen = mmdnet.make_mlp([4, 6, 2], seed=3)
    assert gen.input_dim == 4
    assert gen.output_dim == 2
    samples = np.asarray(gen.sample(10, seed=5))
    assert samples.shape == (10, 2)
    assert np.all((samples > 0.0) & (samples < 1.0))


def test_train_reduces_cost():
    rng = np.random.default_rng(7)
    data = rng.normal(size=(100, 1))
    gen, curve = mmdnet.train(
        data,
        mmdnet.make_affine([2.5], [0.1]),
        iterations=100,
        m_generated=30,
        learning_rate=0.5,
        optimizer="sgd",
        probe_fraction=0.0,
        seed=11,
    )
    costs = curve["minibatch_cost"]
    assert costs[-1] < costs[0]
    fitted = np.asarray(gen.forward(rng.normal(size=(200, 1))))
    assert abs(fitted.mean()) < 0.6


def test_kde():
    gen = [[0.0]]
    val = mmdnet.kde_mean_log_density(gen, [[0.0]], 1.0)
    assert val == pytest.approx(-0.5 * math.log(2.0 * math.pi), abs=1e-12)
    assert mmdnet.kde_select_bandwidth(
        np.random.default_rng(2).normal(size=(100, 1)),
        np.random.default_rng(3).normal(size=(50, 1)),
        [0.01, 0.5, 10.0],
    ) == pytest.approx(0.5)
