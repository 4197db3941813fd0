"""Victim classifiers: full-batch logistic regression and a Gini CART tree."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ShapeError, TrainingError
from .nn import sigmoid


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float = 0.0
    loss_history: list = field(default_factory=list, repr=False)

    @property
    def n_features(self):
        return self.weights.shape[0]


def _check_features(x, f):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != f:
        raise ShapeError(f"expected (*, {f}) input, got {x.shape}")
    return x


def _log_loss(p, y):
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def train_lr(features, labels, epochs=500, lr=0.1, tol=1e-6):
    """Gradient descent on mean cross-entropy from a zero initialization.

    Stops after ``epochs`` steps or once the gradient's max-norm drops below ``tol``.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    if np.unique(y).size < 2:
        raise TrainingError("logistic regression needs both classes")
    model = LogisticModel(np.zeros(x.shape[1]), 0.0)
    n = x.shape[0]
    for _ in range(int(epochs)):
        p = sigmoid(x @ model.weights + model.bias)
        model.loss_history.append(_log_loss(p, y))
        err = p - y
        gw = x.T @ err / n
        gb = float(err.mean())
        if max(np.max(np.abs(gw), initial=0.0), abs(gb)) < tol:
            break
        model.weights = model.weights - lr * gw
        model.bias -= lr * gb
    return model


def predict_proba_lr(model, x):
    x = _check_features(x, model.n_features)
    return sigmoid(x @ model.weights + model.bias)


def gini(labels):
    y = np.asarray(labels).reshape(-1)
    if y.size == 0:
        raise DataError("gini of an empty label set")
    p1 = float(np.mean(y == 1))
    return 1.0 - p1 * p1 - (1.0 - p1) ** 2


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode" = None
    right: "TreeNode" = None
    label: int = 0
    proba: float = 0.0
    n_samples: int = 0
    impurity_decrease: float = 0.0
    n_features: int = None

    @property
    def is_leaf(self):
        return self.left is None

    def depth(self):
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass
class DtConfig:
    max_depth: int = 8
    min_samples_split: int = 2
    criterion: str = "gini"

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.criterion != "gini":
            raise ValueError("only the gini criterion is supported")


def best_split(x, y):
    """Highest Gini decrease over all features and midpoints of consecutive unique values.

    Ties go to the lowest feature index, then the lowest threshold. Returns
    ``(feature, threshold, decrease)`` or ``None`` when no split exists.
    """
    n = y.size
    parent = gini(y)
    best = None
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind="stable")
        xs = x[order, j]
        ys = y[order]
        ones_left = np.cumsum(ys)[:-1]
        n_left = np.arange(1, n)
        boundary = xs[1:] != xs[:-1]
        if not np.any(boundary):
            continue
        n_l = n_left[boundary]
        n_r = n - n_l
        p_l = ones_left[boundary] / n_l
        p_r = (ys.sum() - ones_left[boundary]) / n_r
        g_l = 1.0 - p_l ** 2 - (1.0 - p_l) ** 2
        g_r = 1.0 - p_r ** 2 - (1.0 - p_r) ** 2
        decrease = parent - (n_l * g_l + n_r * g_r) / n
        k = int(np.argmax(decrease))
        thresholds = 0.5 * (xs[:-1][boundary] + xs[1:][boundary])
        if best is None or decrease[k] > best[2]:
            best = (j, float(thresholds[k]), float(decrease[k]))
    return best


def _leaf(y):
    proba = float(np.mean(y == 1))
    return TreeNode(label=int(proba > 0.5), proba=proba, n_samples=int(y.size))


def _grow(x, y, depth, cfg):
    if depth >= cfg.max_depth or y.size < cfg.min_samples_split or np.all(y == y[0]):
        return _leaf(y)
    split = best_split(x, y)
    if split is None:
        return _leaf(y)
    j, thr, dec = split
    go_left = x[:, j] <= thr
    node = _leaf(y)
    node.feature, node.threshold, node.impurity_decrease = j, thr, dec
    node.left = _grow(x[go_left], y[go_left], depth + 1, cfg)
    node.right = _grow(x[~go_left], y[~go_left], depth + 1, cfg)
    return node


def train_dt(features, labels, cfg=None):
    cfg = cfg or DtConfig()
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels).astype(np.int64).reshape(-1)
    if np.unique(y).size < 2:
        raise TrainingError("decision tree needs both classes at the root")
    root = _grow(x, y, 0, cfg)
    root.n_features = x.shape[1]
    return root


def predict_dt(tree, x):
    """Route rows left when ``value <= threshold``; returns (labels, class-1 fractions)."""
    x = np.asarray(x, dtype=np.float64)
    f = getattr(tree, "n_features", None)
    if x.ndim != 2 or (f is not None and x.shape[1] != f):
        raise ShapeError(f"expected (*, {f}) input, got {x.shape}")
    labels = np.empty(x.shape[0], dtype=np.int64)
    probs = np.empty(x.shape[0])
    _route(tree, x, np.arange(x.shape[0]), labels, probs)
    return labels, probs


def _route(node, x, idx, labels, probs):
    if node.is_leaf:
        labels[idx] = node.label
        probs[idx] = node.proba
        return
    left = x[idx, node.feature] <= node.threshold
    _route(node.left, x, idx[left], labels, probs)
    _route(node.right, x, idx[~left], labels, probs)


class Victim:
    """Uniform fit/score wrapper used by the attack pipelines."""

    def __init__(self, kind="lr", lr_epochs=500, lr_rate=0.1, dt_max_depth=8,
                 dt_min_samples_split=2):
        if kind not in ("lr", "dt"):
            raise ValueError(f"victim must be 'lr' or 'dt', got {kind!r}")
        self.kind = kind
        self.lr_epochs = lr_epochs
        self.lr_rate = lr_rate
        self.dt_cfg = DtConfig(dt_max_depth, dt_min_samples_split)
        self.model = None

    def fit(self, ds):
        if self.kind == "lr":
            self.model = train_lr(ds.features, ds.labels, self.lr_epochs, self.lr_rate)
        else:
            self.model = train_dt(ds.features, ds.labels, self.dt_cfg)
        return self

    def predict_proba(self, x):
        if self.model is None:
            raise TrainingError("victim has not been trained")
        if self.kind == "lr":
            return predict_proba_lr(self.model, x)
        return predict_dt(self.model, x)[1]

    def predict(self, x):
        """Hard 0/1 labels (LR: probability >= 0.5; DT: the leaf's majority label)."""
        if self.model is None:
            raise TrainingError("victim has not been trained")
        if self.kind == "lr":
            return (predict_proba_lr(self.model, x) >= 0.5).astype(np.int64)
        return predict_dt(self.model, x)[0]
