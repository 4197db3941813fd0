import numpy as np
import pytest

from _gradcheck import check_network
from wavevae.errors import ShapeError, StateError
from wavevae.nn import (MIN_DILATION, DenseLayer, Network, Optimizer, WaveletLayer, build_mlp,
                        build_wnn, optimizer_step)
from wavevae.numkernel import Rng
from wavevae.wavelets import WaveletKind, wavelet_eval


def test_single_wavelon_morlet_at_zero():
    layer = WaveletLayer([[1.0]], [0.0], [1.0], "morlet")
    assert layer.forward(np.array([[0.0]]))[0, 0] == 1.0


def test_single_wavelon_translation_cancels_input():
    layer = WaveletLayer([[1.0]], [0.5], [2.0], "gaussian")
    assert layer.forward(np.array([[0.5]]))[0, 0] == 1.0


def test_stacked_wavelet_layers_match_manual_composition():
    rng = Rng(21)
    net = build_wnn([3, 4, 2], rng, "mexican_hat")
    x = rng.normal_matrix(5, 3)
    l1, l2 = net.layers
    expected = np.empty((5, 2))
    for r in range(5):
        hidden = []
        for j in range(4):
            s = sum(l1.weights[j, i] * x[r, i] for i in range(3))
            hidden.append(float(wavelet_eval("mexican_hat",
                                             (s - l1.translation[j]) / l1.dilation[j])))
        for k in range(2):
            s = sum(l2.weights[k, j] * hidden[j] for j in range(4))
            expected[r, k] = wavelet_eval("mexican_hat", (s - l2.translation[k]) / l2.dilation[k])
    np.testing.assert_allclose(net.forward(x), expected, rtol=1e-12, atol=1e-14)


def test_dense_layer_forward():
    layer = DenseLayer([[1.0, -1.0]], [0.5], "relu")
    np.testing.assert_array_equal(layer.forward(np.array([[2.0, 1.0], [0.0, 3.0]])),
                                  [[1.5], [0.0]])


def test_forward_shape_error():
    net = build_mlp([3, 2], Rng(0))
    with pytest.raises(ShapeError):
        net.forward(np.ones((2, 4)))


def test_widths_must_chain():
    rng = Rng(0)
    with pytest.raises(ShapeError):
        Network([DenseLayer.init(3, 4, rng), DenseLayer.init(5, 2, rng)])


def test_backward_without_cache():
    layer = WaveletLayer.init(2, 2, Rng(1))
    with pytest.raises(StateError):
        layer.backward(np.ones((1, 2)))


def test_forward_is_repeatable():
    rng = Rng(4)
    net = build_wnn([3, 5, 2], rng, "morlet")
    x = rng.normal_matrix(6, 3)
    assert np.array_equal(net.forward(x), net.forward(x, keep_cache=False))


def test_zero_upstream_gives_zero_gradients():
    rng = Rng(2)
    net = Network([WaveletLayer.init(3, 4, rng, "gaussian"), DenseLayer.init(4, 2, rng, "tanh")])
    x = rng.normal_matrix(5, 3)
    net.forward(x)
    dx = net.backward(np.zeros((5, 2)))
    assert not np.any(dx)
    for g in net.grads():
        assert not np.any(g)


@pytest.mark.parametrize("kind", list(WaveletKind))
def test_wavelet_network_gradients(kind):
    rng = Rng(100 + list(WaveletKind).index(kind))
    net = build_wnn([3, 4, 2], rng, kind)
    x = rng.uniform(15).reshape(5, 3)
    assert check_network(net, x, rng) < 1e-4


@pytest.mark.parametrize("act", ["relu", "tanh", "sigmoid", "identity"])
def test_dense_network_gradients(act):
    rng = Rng(7)
    net = build_mlp([4, 5, 3], rng, act)
    x = rng.uniform(24).reshape(6, 4) + 0.05
    assert check_network(net, x, rng) < 1e-4


def test_sgd_step():
    p = np.array([1.0])
    Optimizer("sgd", lr=0.1).step([p], [np.array([2.0])])
    assert p[0] == pytest.approx(0.8)


@pytest.mark.parametrize("kind", ["sgd", "momentum"])
def test_zero_gradient_is_fixed_point(kind):
    p = np.array([0.3, -1.2])
    Optimizer(kind, lr=0.5, momentum=0.9).step([p], [np.zeros(2)])
    np.testing.assert_array_equal(p, [0.3, -1.2])


def test_momentum_accumulates():
    p = np.array([0.0])
    opt = Optimizer("momentum", lr=0.1, momentum=0.5)
    opt.step([p], [np.array([1.0])])
    opt.step([p], [np.array([1.0])])
    # v1 = -0.1, v2 = 0.5 * -0.1 - 0.1 = -0.15
    assert p[0] == pytest.approx(-0.25)


def test_adam_first_step():
    p = np.array([1.0])
    Optimizer("adam", lr=0.001).step([p], [np.array([1.0])])
    # m_hat = 1, v_hat = 1, step = lr * 1 / (1 + 1e-8)
    assert 1.0 - p[0] == pytest.approx(0.001 / (1.0 + 1e-8), rel=1e-12)


def test_adagrad_first_step():
    p = np.array([1.0])
    Optimizer("adagrad", lr=0.1).step([p], [np.array([4.0])])
    assert p[0] == pytest.approx(1.0 - 0.1 * 4.0 / (4.0 + 1e-8))


def test_optimizer_shape_mismatch():
    with pytest.raises(ShapeError):
        Optimizer("sgd", lr=0.1).step([np.zeros(2)], [np.zeros(3)])


def test_dilation_clamp_after_steps():
    rng = Rng(8)
    net = build_wnn([2, 3], rng, "morlet")
    opt = Optimizer("sgd", lr=1.0)
    x = rng.normal_matrix(4, 2)
    for _ in range(20):
        net.forward(x)
        net.backward(np.ones((4, 3)))
        layer = net.layers[0]
        # push every dilation straight at zero
        layer.grads["dilation"] = layer.dilation.copy()
        optimizer_step(opt, [net])
        assert np.min(np.abs(layer.dilation)) >= MIN_DILATION


def test_dilation_clamp_at_construction():
    layer = WaveletLayer([[1.0], [1.0]], [0.0, 0.0], [0.0, -1e-6])
    np.testing.assert_array_equal(layer.dilation, [MIN_DILATION, -MIN_DILATION])
