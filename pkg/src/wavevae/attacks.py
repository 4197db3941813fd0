"""End-to-end evasion and data-poisoning pipelines.

Both pipelines share the same preprocessing spine (stratified split, train-fitted
min-max scaling, optional SMOTE on train) and differ in which partition the
generator rewrites and which model gets evaluated.
"""
import hashlib
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import data as dp
from .errors import StageError
from .metrics import auc, confusion, roc_auc
from .vae import TrainConfig, Variant, build_model, generate, make_noise, train
from .victims import Victim


@dataclass
class ExperimentConfig:
    dataset_path: str = ""
    label_column: str = None
    attack: str = "evasion"
    victim: str = "lr"
    generator: str = "vae_wnn"
    epochs: int = 100
    hidden_layers: list = field(default_factory=lambda: [16, 8])
    lr: float = 0.01
    momentum: float = 0.0
    optimizer: str = "sgd"
    activation: str = None
    wavelet: str = None
    latent_dim: int = 2
    batch_size: int = 64
    smote: str = "auto"
    smote_k: int = 5
    train_fraction: float = 0.7
    seed: int = 0
    chaos_seed: float = None
    gen_chaos_seed: float = None
    deterministic_latent: bool = False
    threshold: float = 0.5
    lr_epochs: int = 500
    lr_rate: float = 0.1
    dt_max_depth: int = 8
    dt_min_samples_split: int = 2
    output: str = "results"

    def resolved(self):
        """Copy with generator-dependent defaults filled in."""
        cfg = ExperimentConfig(**asdict(self))
        variant = Variant.parse(cfg.generator)
        if variant.wavelet and cfg.wavelet is None:
            cfg.wavelet = "morlet"
        if not variant.wavelet and cfg.activation is None:
            cfg.activation = "relu"
        if variant.chaotic:
            if cfg.chaos_seed is None:
                cfg.chaos_seed = 0.1234
            if cfg.gen_chaos_seed is None:
                cfg.gen_chaos_seed = _derived_chaos_seed(cfg.chaos_seed)
        return cfg


def _derived_chaos_seed(seed):
    # a second, distinct logistic-map seed for the generation pass
    s = (float(seed) * 1.6180339887498949) % 1.0
    return s if s not in (0.0, 0.25, 0.5, 0.75) else 0.4321


# Sub-seeds for the independent random consumers of one run.
SPLIT, SMOTE, INIT, SHUFFLE, TRAIN_NOISE, GEN_NOISE = range(6)


def sub_seed(seed, stream):
    return int(seed) * 8 + stream


@dataclass
class AttackReport:
    dataset: str
    attack: str
    victim: str
    generator: str
    auc_before: float
    auc_after: float
    roc_auc_before: float
    roc_auc_after: float
    sens_before: float = 0.0
    spec_before: float = 0.0
    sens_after: float = 0.0
    spec_after: float = 0.0
    degenerate_after: bool = False
    loss_first: float = float("nan")
    loss_last: float = float("nan")
    loss_history: list = field(default_factory=list)
    epsilon_mean: float = None
    smote_applied: bool = False
    wavelon_form: str = "y_j = psi((w_j . x - b_j) / a_j)"
    config: dict = field(default_factory=dict)
    checksums: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0
    status: str = "ok"
    error: str = None

    @property
    def delta(self):
        return self.auc_before - self.auc_after

    def to_dict(self):
        d = asdict(self)
        d["delta"] = self.delta
        return d


def checksum(ds):
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(ds.features).tobytes())
    h.update(np.ascontiguousarray(ds.labels).tobytes())
    return h.hexdigest()


class VaeGenerator:
    """Trains a VAE variant on the training features and rewrites a partition with it."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.variant = Variant.parse(cfg.generator)
        self.model = None
        self.history = []
        self.gen_noise = None

    def fit(self, features):
        cfg = self.cfg
        self.model = build_model(self.variant, features.shape[1], cfg.hidden_layers,
                                 cfg.latent_dim, cfg.activation or "relu",
                                 cfg.wavelet or "morlet", seed=sub_seed(cfg.seed, INIT))
        tc = TrainConfig(cfg.epochs, cfg.lr, cfg.momentum, cfg.optimizer, cfg.batch_size,
                         seed=sub_seed(cfg.seed, SHUFFLE))
        noise = make_noise(self.variant, sub_seed(cfg.seed, TRAIN_NOISE), cfg.chaos_seed)
        self.history = train(self.model, features, tc, noise)
        return self

    def generate(self, ds):
        cfg = self.cfg
        self.gen_noise = make_noise(self.variant, sub_seed(cfg.seed, GEN_NOISE),
                                    cfg.gen_chaos_seed)
        return generate(self.model, ds, self.gen_noise, cfg.deterministic_latent)

    @property
    def epsilon_mean(self):
        return getattr(self.gen_noise, "mean", None)


class IdentityGenerator:
    """Pass-through stand-in for a generator; used to check the pipelines' null behaviour."""

    history = []
    epsilon_mean = None

    def __init__(self, cfg=None):
        self.cfg = cfg

    def fit(self, features):
        return self

    def generate(self, ds):
        return ds.with_features(ds.features.copy())


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def prepare(cfg, dataset=None):
    """Split, scale (fit on train, clamp test) and optionally SMOTE the training partition."""
    ds = dataset if dataset is not None else _stage(
        "load", dp.load_csv, cfg.dataset_path, cfg.label_column)
    train_ds, test_ds = _stage("split", dp.stratified_split, ds, cfg.train_fraction,
                               sub_seed(cfg.seed, SPLIT))
    params = _stage("scale", dp.fit_minmax, train_ds)
    train_ds = dp.apply_minmax(train_ds, params)
    test_ds = dp.apply_minmax(test_ds, params)
    applied = _stage("smote", dp.needs_smote, train_ds, cfg.smote)
    if applied:
        train_ds = _stage("smote", dp.smote, train_ds, cfg.smote_k, sub_seed(cfg.seed, SMOTE))
    return ds.name, train_ds, test_ds, applied


def _victim(cfg):
    return Victim(cfg.victim, cfg.lr_epochs, cfg.lr_rate, cfg.dt_max_depth,
                  cfg.dt_min_samples_split)


def _score(victim, ds, threshold):
    pred = victim.predict(ds.features)
    res = auc(confusion(ds.labels, pred.astype(np.float64), threshold))
    return res, roc_auc(ds.labels, victim.predict_proba(ds.features))


def run_attack(cfg, dataset=None, generator_factory=None):
    """Run one evasion or poison experiment and return its AttackReport."""
    started = time.perf_counter()
    cfg = cfg.resolved()
    if cfg.attack not in ("evasion", "poison"):
        raise StageError("config", ValueError(f"unknown attack {cfg.attack!r}"))
    name, train_ds, test_ds, smote_applied = prepare(cfg, dataset)
    train_sum, test_sum = checksum(train_ds), checksum(test_ds)

    victim = _stage("victim", _victim(cfg).fit, train_ds)
    before, roc_before = _stage("victim", _score, victim, test_ds, cfg.threshold)

    factory = generator_factory or VaeGenerator
    gen = _stage("generator", factory(cfg).fit, train_ds.features)

    if cfg.attack == "evasion":
        adv_test = _stage("generate", gen.generate, test_ds)
        after, roc_after = _stage("evaluate", _score, victim, adv_test, cfg.threshold)
    else:
        adv_train = _stage("generate", gen.generate, train_ds)
        retrained = _stage("victim", _victim(cfg).fit, adv_train)
        after, roc_after = _stage("evaluate", _score, retrained, test_ds, cfg.threshold)

    history = list(gen.history)
    report = AttackReport(
        dataset=name or cfg.dataset_path, attack=cfg.attack, victim=cfg.victim,
        generator=cfg.generator if generator_factory is None else "identity",
        auc_before=before.auc, auc_after=after.auc,
        roc_auc_before=roc_before, roc_auc_after=roc_after,
        sens_before=before.sensitivity, spec_before=before.specificity,
        sens_after=after.sensitivity, spec_after=after.specificity,
        degenerate_after=after.degenerate,
        loss_first=history[0] if history else float("nan"),
        loss_last=history[-1] if history else float("nan"),
        loss_history=history, epsilon_mean=gen.epsilon_mean, smote_applied=smote_applied,
        config=asdict(cfg),
        checksums={"train_before": train_sum, "train_after": checksum(train_ds),
                   "test_before": test_sum, "test_after": checksum(test_ds)},
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
    )
    # fitted objects for inspection; not part of the serialized record
    report.models = {"victim": victim, "generator": gen,
                     "retrained": retrained if cfg.attack == "poison" else None}
    return report


def run_evasion(cfg, dataset=None, generator_factory=None):
    cfg = ExperimentConfig(**{**asdict(cfg), "attack": "evasion"})
    return run_attack(cfg, dataset, generator_factory)


def run_poison(cfg, dataset=None, generator_factory=None):
    cfg = ExperimentConfig(**{**asdict(cfg), "attack": "poison"})
    return run_attack(cfg, dataset, generator_factory)
