import itertools

import numpy as np
import pytest

from wavevae.data import Dataset
from wavevae.errors import DataError, TrainingError
from wavevae.metrics import auc_score
from wavevae.numkernel import Rng
from wavevae.victims import (DtConfig, Victim, best_split, gini, predict_dt, predict_proba_lr,
                             train_dt, train_lr)

X1 = np.array([[0.0], [1.0], [2.0], [3.0]])
Y1 = np.array([0, 0, 1, 1])


def test_lr_separable_line():
    model = train_lr(X1, Y1)
    assert auc_score(Y1, predict_proba_lr(model, X1)) == 1.0


def test_lr_zero_epochs_is_chance():
    model = train_lr(X1, Y1, epochs=0)
    p = predict_proba_lr(model, X1)
    assert np.all(p == 0.5)
    assert auc_score(Y1, p) == 0.5


def test_lr_deterministic():
    rng = Rng(3)
    x, y = rng.normal_matrix(80, 3), rng.integers(2, 80)
    a, b = train_lr(x, y), train_lr(x, y)
    assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


def test_lr_saturates_without_overflow():
    model = train_lr(X1, Y1, epochs=2000, lr=1.0)
    with np.errstate(all="raise"):
        p = predict_proba_lr(model, np.array([[40.0], [-40.0]]))
    assert p[0] >= 1 - 1e-12
    assert 0.0 <= p[1] < 1e-6


def test_lr_loss_non_increasing():
    rng = Rng(5)
    x = rng.normal_matrix(100, 4)
    y = (x[:, 0] + 0.5 * rng.normal(100) > 0).astype(int)
    hist = train_lr(x, y, epochs=300, lr=0.1).loss_history
    assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))


def test_lr_needs_two_classes():
    with pytest.raises(TrainingError):
        train_lr(X1, np.ones(4))


def test_gini_examples():
    assert gini([1, 1, 1]) == 0.0
    assert gini([0, 1]) == 0.5
    assert gini([1, 0, 0, 0]) == pytest.approx(0.375, abs=1e-15)
    with pytest.raises(DataError):
        gini([])


def test_dt_depth_one_split():
    tree = train_dt(X1, Y1)
    assert tree.feature == 0 and tree.threshold == 1.5
    assert tree.left.is_leaf and tree.right.is_leaf
    assert predict_dt(tree, X1)[0].tolist() == [0, 0, 1, 1]


def test_dt_constant_features_make_a_leaf():
    tree = train_dt(np.ones((6, 2)), [0, 1, 0, 1, 1, 1])
    assert tree.is_leaf
    assert tree.label == 1 and tree.proba == pytest.approx(4 / 6)


def test_dt_tie_routes_left():
    tree = train_dt(X1, Y1)
    assert predict_dt(tree, np.array([[1.5]]))[0].tolist() == [0]


def exhaustive_best(x, y):
    parent, n, best = gini(y), y.size, 0.0
    for j in range(x.shape[1]):
        vals = np.unique(x[:, j])
        for a, b in zip(vals, vals[1:]):
            t = 0.5 * (a + b)
            left = x[:, j] <= t
            score = parent - (left.sum() * gini(y[left]) + (~left).sum() * gini(y[~left])) / n
            best = max(best, score)
    return best


def test_best_split_matches_exhaustive():
    rng = Rng(11)
    for _ in range(20):
        x = np.round(rng.uniform(50 * 4).reshape(50, 4), 2)
        y = rng.integers(2, 50)
        if y.min() == y.max():
            continue
        got = best_split(x, y)
        assert got[2] >= exhaustive_best(x, y) - 1e-12


def test_dt_memorizes_distinct_rows():
    rng = Rng(6)
    x, y = rng.normal_matrix(40, 3), rng.integers(2, 40)
    tree = train_dt(x, y, DtConfig(max_depth=40))
    assert np.array_equal(predict_dt(tree, x)[0], y)


def test_dt_respects_max_depth():
    rng = Rng(6)
    x, y = rng.normal_matrix(200, 3), rng.integers(2, 200)
    assert train_dt(x, y, DtConfig(max_depth=3)).depth() <= 3


def test_victim_wrapper():
    ds = Dataset(X1, Y1)
    for kind in ("lr", "dt"):
        v = Victim(kind).fit(ds)
        assert v.predict(X1).tolist() == [0, 0, 1, 1]
        assert v.predict_proba(X1).shape == (4,)
    with pytest.raises(TrainingError):
        Victim("lr").predict(X1)
    with pytest.raises(ValueError):
        Victim("svm")


def test_dt_leaf_ties_predict_zero():
    # two identical rows with opposite labels: leaf proba 0.5, label 0
    tree = train_dt(np.array([[0.0], [0.0], [1.0]]), [0, 1, 1])
    labels, probs = predict_dt(tree, np.array([[0.0]]))
    assert probs[0] == 0.5 and labels[0] == 0
