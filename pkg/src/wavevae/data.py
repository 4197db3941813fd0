"""Dataset container, CSV I/O, stratified split, min-max scaling and SMOTE."""
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, ShapeError
from .numkernel import Rng


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: list = field(default_factory=list)
    name: str = ""
    # set by smote() when the minority class had a single row
    smote_fallback: bool = False

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2:
            raise ShapeError(f"features must be 2-D, got {self.features.shape}")
        self.labels = np.asarray(self.labels).astype(np.int64).reshape(-1)
        if self.labels.shape[0] != self.features.shape[0]:
            raise ShapeError(f"{self.features.shape[0]} rows but {self.labels.shape[0]} labels")
        if not np.all(np.isin(self.labels, (0, 1))):
            raise DataError("labels must be 0 or 1")
        if not np.all(np.isfinite(self.features)):
            raise DataError("features contain non-finite values")
        if not self.feature_names:
            self.feature_names = [f"x{i}" for i in range(self.n_features)]

    @property
    def n_rows(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    def class_counts(self):
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

    def subset(self, idx):
        return Dataset(self.features[idx], self.labels[idx], list(self.feature_names), self.name)

    def with_features(self, features):
        return Dataset(features, self.labels.copy(), list(self.feature_names), self.name)


def load_csv(path, label_column=None):
    """Read a numeric CSV with a header row. The label column defaults to the last one."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise DataError(f"{path}: need a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    if label_column is None:
        label_idx = len(header) - 1
    elif label_column in header:
        label_idx = header.index(label_column)
    else:
        raise DataError(f"{path}: label column {label_column!r} not in header")
    values = np.empty((len(rows) - 1, len(header)))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r} has {len(row)} cells, header has {len(header)}")
        for c, cell in enumerate(row):
            try:
                values[r - 2, c] = float(cell)
            except ValueError:
                raise DataError(f"{path}: cannot parse {cell!r} at row {r}, "
                                f"column {c + 1} ({header[c]})") from None
    labels = values[:, label_idx]
    if not np.all(np.isin(labels, (0.0, 1.0))):
        bad = labels[~np.isin(labels, (0.0, 1.0))][0]
        raise DataError(f"{path}: label {bad!r} is not 0 or 1")
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: non-finite feature value")
    keep = [c for c in range(len(header)) if c != label_idx]
    return Dataset(values[:, keep], labels.astype(np.int64), [header[c] for c in keep],
                   name=path.stem)


def save_csv(ds, path, label_name="label"):
    """Write features with ``repr`` floats so a reload is bit-identical."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*ds.feature_names, label_name])
        for row, y in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in row] + [int(y)])


def stratified_split(ds, train_fraction=0.7, seed=0):
    """Per class, the first ``floor(count * fraction)`` shuffled rows go to train, the rest to test."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    rng = Rng(seed)
    train_idx, test_idx = [], []
    for cls in (0, 1):
        members = np.flatnonzero(ds.labels == cls)
        if members.size < 2:
            raise DataError(f"class {cls} has {members.size} rows; stratification needs >= 2 per class")
        members = members[rng.permutation(members.size)]
        k = math.floor(members.size * train_fraction)
        train_idx.append(members[:k])
        test_idx.append(members[k:])
    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.sort(np.concatenate(test_idx))
    return ds.subset(train_idx), ds.subset(test_idx)


@dataclass
class ScalerParams:
    mins: np.ndarray
    maxs: np.ndarray


def fit_minmax(train):
    x = train.features if isinstance(train, Dataset) else np.asarray(train, dtype=np.float64)
    return ScalerParams(x.min(axis=0), x.max(axis=0))


def apply_minmax(ds, params, clamp=True):
    """``(x - min) / (max - min)``; constant columns map to 0, results clamped to [0, 1]."""
    span = params.maxs - params.mins
    const = span == 0
    scaled = (ds.features - params.mins) / np.where(const, 1.0, span)
    scaled[:, const] = 0.0
    if clamp:
        scaled = np.clip(scaled, 0.0, 1.0)
    return ds.with_features(scaled)


def _knn_indices(points, k):
    """Brute-force k nearest neighbours (self excluded), ties broken by index."""
    d2 = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=-1)
    np.fill_diagonal(d2, np.inf)
    return np.argsort(d2, axis=1, kind="stable")[:, :k]


def smote(ds, k=5, seed=0):
    """Oversample the minority class until the class counts match."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n0, n1 = ds.class_counts()
    if n0 == 0 or n1 == 0:
        raise DataError("SMOTE needs both classes present")
    if n0 == n1:
        return ds
    minority = 0 if n0 < n1 else 1
    need = abs(n0 - n1)
    pts = ds.features[ds.labels == minority]
    rng = Rng(seed)
    fallback = pts.shape[0] == 1
    if fallback:
        synth = np.repeat(pts, need, axis=0)
    else:
        nn = _knn_indices(pts, min(k, pts.shape[0] - 1))
        base = rng.integers(pts.shape[0], need)
        pick = rng.integers(nn.shape[1], need)
        neighbour = nn[base, pick]
        delta = rng.uniform(need)[:, None]
        # uniform() is (0, 1]; fold the 1.0 endpoint onto 0 to keep delta in [0, 1)
        delta = np.where(delta >= 1.0, 0.0, delta)
        synth = pts[base] + delta * (pts[neighbour] - pts[base])
    out = Dataset(np.vstack([ds.features, synth]),
                  np.concatenate([ds.labels, np.full(need, minority)]),
                  list(ds.feature_names), ds.name)
    out.smote_fallback = fallback
    return out


def needs_smote(ds, mode="auto", ratio=0.8):
    """Resolve ``smote = on|off|auto``; auto applies when minority/majority < ``ratio``."""
    mode = str(mode).lower()
    if mode == "on":
        return True
    if mode == "off":
        return False
    if mode != "auto":
        raise ValueError(f"smote mode must be on, off or auto, got {mode!r}")
    n0, n1 = ds.class_counts()
    return min(n0, n1) / max(n0, n1) < ratio


def make_synthetic(kind, n, f, seed=0, path=None):
    """Two-class Gaussian clusters, unit variance, class means 2 standard deviations apart
    in every coordinate. ``imbalanced_gaussians`` uses a 9:1 class ratio."""
    if n < 20:
        raise ValueError("n must be >= 20")
    if kind == "separable_gaussians":
        n1 = n // 2
    elif kind == "imbalanced_gaussians":
        n1 = n // 10
    else:
        raise ValueError(f"unknown synthetic kind {kind!r}")
    n0 = n - n1
    rng = Rng(seed)
    x = rng.normal_matrix(n, f)
    labels = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n1, dtype=np.int64)])
    shift = np.where(np.arange(f) % 2 == 0, 2.0, -2.0)
    x[labels == 1] += shift
    order = rng.permutation(n)
    ds = Dataset(x[order], labels[order], [f"x{i}" for i in range(f)], name=kind)
    if path is not None:
        save_csv(ds, path)
    return ds
