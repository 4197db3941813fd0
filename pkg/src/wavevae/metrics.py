"""Threshold-based classification metrics.

``auc`` here is the mean of sensitivity and specificity at a fixed threshold
(balanced accuracy). The ROC integral is available separately as ``roc_auc``.
"""
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import ShapeError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class AucResult:
    auc: float
    sensitivity: float
    specificity: float
    degenerate: bool

    def __float__(self):
        return self.auc


def confusion(y_true, y_prob, threshold=0.5):
    """Predict 1 iff probability >= threshold, then tally."""
    y_true = np.asarray(y_true).reshape(-1)
    y_prob = np.asarray(y_prob, dtype=np.float64).reshape(-1)
    if y_true.shape != y_prob.shape:
        raise ShapeError(f"{y_true.size} labels but {y_prob.size} probabilities")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    pred = y_prob >= threshold
    pos = y_true == 1
    return ConfusionMatrix(tp=int(np.sum(pred & pos)), fp=int(np.sum(pred & ~pos)),
                           tn=int(np.sum(~pred & ~pos)), fn=int(np.sum(~pred & pos)))


def auc(cm):
    degenerate = False
    if cm.tp + cm.fn:
        sens = cm.tp / (cm.tp + cm.fn)
    else:
        sens, degenerate = 0.0, True
    if cm.tn + cm.fp:
        spec = cm.tn / (cm.tn + cm.fp)
    else:
        spec, degenerate = 0.0, True
    return AucResult((sens + spec) / 2.0, sens, spec, degenerate)


def auc_score(y_true, y_prob, threshold=0.5):
    return auc(confusion(y_true, y_prob, threshold)).auc


def roc_auc(y_true, scores):
    """Area under the ROC curve via the Mann-Whitney rank sum (ties count one half).

    Returns nan when only one class is present.
    """
    y_true = np.asarray(y_true).reshape(-1)
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    pos = scores[y_true == 1]
    neg = scores[y_true == 0]
    if pos.size == 0 or neg.size == 0:
        return float("nan")
    r = rankdata(np.concatenate([pos, neg]))
    rank_sum = r[:pos.size].sum()
    return float((rank_sum - pos.size * (pos.size + 1) / 2.0) / (pos.size * neg.size))
