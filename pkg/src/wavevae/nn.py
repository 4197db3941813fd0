"""Dense and wavelet layers, a sequential network with manual backprop, and optimizers."""
import enum

import numpy as np

from .errors import ShapeError, StateError
from .wavelets import WaveletKind, wavelet_eval, wavelet_grad

MIN_DILATION = 1e-3


class Activation(enum.Enum):
    RELU = "relu"
    TANH = "tanh"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            raise ValueError(f"unknown activation {token!r}") from None


def sigmoid(x):
    # split by sign so exp never overflows
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _activate(kind, z):
    if kind is Activation.RELU:
        return np.maximum(z, 0.0)
    if kind is Activation.TANH:
        return np.tanh(z)
    if kind is Activation.SIGMOID:
        return sigmoid(z)
    return z.copy()


def _activate_grad(kind, z, y):
    if kind is Activation.RELU:
        return (z > 0).astype(np.float64)
    if kind is Activation.TANH:
        return 1.0 - y * y
    if kind is Activation.SIGMOID:
        return y * (1.0 - y)
    return np.ones_like(z)


class Layer:
    """Common bookkeeping: named parameters, matching gradients, forward cache."""

    param_names = ()

    def __init__(self):
        self.grads = {}
        self._cache = None

    @property
    def in_dim(self):
        return self.weights.shape[1]

    @property
    def out_dim(self):
        return self.weights.shape[0]

    def params(self):
        return [getattr(self, name) for name in self.param_names]

    def grad_list(self):
        return [self.grads[name] for name in self.param_names]

    def clear_cache(self):
        self._cache = None

    def enforce_constraints(self):
        pass

    def _check_input(self, x):
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ShapeError(f"{type(self).__name__} expects (*, {self.in_dim}) input, "
                             f"got {x.shape}")


class DenseLayer(Layer):
    """``y = act(x W^T + bias)`` with ``W`` stored as (out, in)."""

    param_names = ("weights", "bias")

    def __init__(self, weights, bias, activation="identity"):
        super().__init__()
        self.weights = np.array(weights, dtype=np.float64)
        self.bias = np.array(bias, dtype=np.float64).reshape(-1)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ShapeError(f"bias {self.bias.shape} does not match weights {self.weights.shape}")
        self.activation = Activation.parse(activation)

    @classmethod
    def init(cls, in_dim, out_dim, rng, activation="identity"):
        return cls(rng.normal_matrix(out_dim, in_dim), rng.normal(out_dim), activation)

    def forward(self, x, keep_cache=True):
        self._check_input(x)
        z = x @ self.weights.T + self.bias
        y = _activate(self.activation, z)
        if keep_cache:
            self._cache = (x, z, y)
        return y

    def backward(self, upstream):
        if self._cache is None:
            raise StateError("backward called without a cached forward pass")
        x, z, y = self._cache
        if upstream.shape != y.shape:
            raise ShapeError(f"upstream gradient {upstream.shape} does not match output {y.shape}")
        delta = upstream * _activate_grad(self.activation, z, y)
        self.grads["weights"] = delta.T @ x
        self.grads["bias"] = delta.sum(axis=0)
        return delta @ self.weights


class WaveletLayer(Layer):
    """Layer of wavelons: ``u_j = (w_j . x - b_j) / a_j`` then ``y_j = psi(u_j)``."""

    param_names = ("weights", "translation", "dilation")

    def __init__(self, weights, translation, dilation, kind="morlet"):
        super().__init__()
        self.weights = np.array(weights, dtype=np.float64)
        self.translation = np.array(translation, dtype=np.float64).reshape(-1)
        self.dilation = np.array(dilation, dtype=np.float64).reshape(-1)
        out = self.weights.shape[0]
        if self.translation.shape != (out,) or self.dilation.shape != (out,):
            raise ShapeError("translation and dilation must have one entry per wavelon")
        self.kind = WaveletKind.parse(kind)
        self.enforce_constraints()

    @classmethod
    def init(cls, in_dim, out_dim, rng, kind="morlet"):
        weights = rng.normal_matrix(out_dim, in_dim)
        translation = rng.normal(out_dim)
        dilation = np.abs(rng.normal(out_dim)) + 0.5
        return cls(weights, translation, dilation, kind)

    def enforce_constraints(self):
        a = self.dilation
        small = np.abs(a) < MIN_DILATION
        if np.any(small):
            a[small] = np.where(a[small] < 0, -MIN_DILATION, MIN_DILATION)

    def forward(self, x, keep_cache=True):
        self._check_input(x)
        u = (x @ self.weights.T - self.translation) / self.dilation
        y = wavelet_eval(self.kind, u)
        if keep_cache:
            self._cache = (x, u)
        return y

    def backward(self, upstream):
        if self._cache is None:
            raise StateError("backward called without a cached forward pass")
        x, u = self._cache
        if upstream.shape != u.shape:
            raise ShapeError(f"upstream gradient {upstream.shape} does not match output {u.shape}")
        g = upstream * wavelet_grad(self.kind, u) / self.dilation
        self.grads["weights"] = g.T @ x
        self.grads["translation"] = -g.sum(axis=0)
        self.grads["dilation"] = -(g * u).sum(axis=0)
        return g @ self.weights


class Network:
    """Ordered stack of layers whose widths must chain."""

    def __init__(self, layers):
        self.layers = list(layers)
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if prev.out_dim != nxt.in_dim:
                raise ShapeError(f"layer widths do not chain: {prev.out_dim} -> {nxt.in_dim}")

    @property
    def in_dim(self):
        return self.layers[0].in_dim

    @property
    def out_dim(self):
        return self.layers[-1].out_dim

    def forward(self, batch, keep_cache=True):
        x = np.asarray(batch, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ShapeError(f"network expects (*, {self.in_dim}) input, got {x.shape}")
        for layer in self.layers:
            x = layer.forward(x, keep_cache=keep_cache)
        return x

    def backward(self, upstream):
        """Backpropagate ``dL/d(output)``; fills each layer's ``grads`` and returns ``dL/d(input)``."""
        g = np.asarray(upstream, dtype=np.float64)
        for layer in reversed(self.layers):
            g = layer.backward(g)
        return g

    def params(self):
        return [p for layer in self.layers for p in layer.params()]

    def grads(self):
        return [g for layer in self.layers for g in layer.grad_list()]

    def enforce_constraints(self):
        for layer in self.layers:
            layer.enforce_constraints()


def build_mlp(sizes, rng, activation="relu", final_activation=None):
    """Dense stack over ``sizes = [in, h1, ..., out]``."""
    layers = []
    for i, (a, b) in enumerate(zip(sizes, sizes[1:])):
        last = i == len(sizes) - 2
        act = final_activation if (last and final_activation is not None) else activation
        layers.append(DenseLayer.init(a, b, rng, act))
    return Network(layers)


def build_wnn(sizes, rng, kind="morlet"):
    """Deep wavelet stack over ``sizes = [in, h1, ..., hk]`` (every layer is wavelons)."""
    return Network([WaveletLayer.init(a, b, rng, kind) for a, b in zip(sizes, sizes[1:])])


class OptimizerKind(enum.Enum):
    SGD = "sgd"
    MOMENTUM = "momentum"
    ADAM = "adam"
    ADAGRAD = "adagrad"

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            raise ValueError(f"unknown optimizer {token!r}") from None


class Optimizer:
    """In-place first-order update over a fixed list of parameter arrays."""

    beta1 = 0.9
    beta2 = 0.999
    eps = 1e-8

    def __init__(self, kind="adam", lr=0.001, momentum=0.0):
        self.kind = OptimizerKind.parse(kind)
        if not lr > 0:
            raise ValueError("learning rate must be positive")
        self.lr = float(lr)
        self.momentum = float(momentum)
        self.t = 0
        self.slots = None

    def _init_slots(self, params):
        if self.kind is OptimizerKind.ADAM:
            self.slots = [(np.zeros_like(p), np.zeros_like(p)) for p in params]
        elif self.kind in (OptimizerKind.MOMENTUM, OptimizerKind.ADAGRAD):
            self.slots = [np.zeros_like(p) for p in params]
        else:
            self.slots = [None] * len(params)

    def step(self, params, grads):
        if len(params) != len(grads):
            raise ShapeError(f"{len(params)} parameters but {len(grads)} gradients")
        for p, g in zip(params, grads):
            if np.shape(p) != np.shape(g):
                raise ShapeError(f"parameter shape {np.shape(p)} != gradient shape {np.shape(g)}")
        if self.slots is None:
            self._init_slots(params)
        elif len(self.slots) != len(params):
            raise ShapeError("optimizer was initialized for a different parameter list")
        self.t += 1
        lr = self.lr
        for i, (p, g) in enumerate(zip(params, grads)):
            if self.kind is OptimizerKind.SGD:
                p -= lr * g
            elif self.kind is OptimizerKind.MOMENTUM:
                v = self.slots[i]
                v *= self.momentum
                v -= lr * g
                p += v
            elif self.kind is OptimizerKind.ADAM:
                m, s = self.slots[i]
                m *= self.beta1
                m += (1.0 - self.beta1) * g
                s *= self.beta2
                s += (1.0 - self.beta2) * g * g
                m_hat = m / (1.0 - self.beta1 ** self.t)
                s_hat = s / (1.0 - self.beta2 ** self.t)
                p -= lr * m_hat / (np.sqrt(s_hat) + self.eps)
            else:
                acc = self.slots[i]
                acc += g * g
                p -= lr * g / (np.sqrt(acc) + self.eps)
        return params


def optimizer_step(opt, networks):
    """Apply one optimizer update to every parameter of ``networks`` and re-clamp dilations."""
    params, grads = [], []
    for net in networks:
        params.extend(net.params())
        grads.extend(net.grads())
    opt.step(params, grads)
    for net in networks:
        net.enforce_constraints()
    return params
