"""Central-difference gradient checks for layers, networks and the VAE loss."""
import numpy as np

from wavevae.numkernel import finite_diff

STEP = 1e-5
FLOOR = 1e-8


def rel_error(analytic, numeric):
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), FLOOR)
    return float(np.max(np.abs(analytic - numeric) / denom))


def numeric_param_grad(loss_fn, param):
    """finite_diff over ``param`` in place, restoring it afterwards."""
    base = param.copy()

    def f(values):
        param[...] = values
        return loss_fn()

    grad = finite_diff(f, base, STEP)
    param[...] = base
    return grad


def check_network(net, x, target_rng):
    """Scalar loss sum(c * out) with fixed random c; returns worst relative error
    over every parameter and the input."""
    out = net.forward(x)
    c = target_rng.normal_matrix(*out.shape)

    def loss():
        return float(np.sum(c * net.forward(x, keep_cache=False)))

    net.forward(x)
    dx = net.backward(c)
    worst = 0.0
    for layer in net.layers:
        for name in layer.param_names:
            analytic = layer.grads[name].copy()
            numeric = numeric_param_grad(loss, getattr(layer, name))
            worst = max(worst, rel_error(analytic, numeric))
    x = x.copy()
    numeric_x = numeric_param_grad(loss, x)
    worst = max(worst, rel_error(dx, numeric_x))
    return worst


def check_wavelet_layer(layer, x, target_rng):
    """Like ``check_network`` for one wavelet layer, but each wavelon's parameters are
    differenced against that wavelon's own output column only. Units far out on a
    wavelet's tail have gradients near 1e-8, below the roundoff of a summed loss."""
    out = layer.forward(x)
    c = target_rng.normal_matrix(*out.shape)
    layer.forward(x)
    dx = layer.backward(c)
    worst = 0.0
    for name in layer.param_names:
        analytic = layer.grads[name]
        param = getattr(layer, name)
        for j in range(param.shape[0]):
            def unit_loss(j=j):
                return float(np.sum(c[:, j] * layer.forward(x, keep_cache=False)[:, j]))
            numeric = numeric_param_grad(unit_loss, param[j:j + 1])
            worst = max(worst, rel_error(analytic[j:j + 1], numeric))
    x = x.copy()

    def loss():
        return float(np.sum(c * layer.forward(x, keep_cache=False)))

    worst = max(worst, rel_error(dx, numeric_param_grad(loss, x)))
    return worst
