"""Adversarial tabular sample generation with wavelet and chaotic VAEs.

Generators (VAE-MLP, VAE-Deep-WNN and their logistic-map-noise counterparts)
rewrite a data partition; the evasion and poisoning pipelines measure how much
that rewrite costs a logistic-regression or decision-tree victim.
"""
from .attacks import (AttackReport, ExperimentConfig, IdentityGenerator, run_attack,
                      run_evasion, run_poison)
from .chaos import LogisticMapStream, new_stream
from .data import (Dataset, apply_minmax, fit_minmax, load_csv, make_synthetic, save_csv,
                   smote, stratified_split)
from .metrics import ConfusionMatrix, auc, auc_score, confusion, roc_auc
from .nn import DenseLayer, Network, Optimizer, WaveletLayer
from .numkernel import Rng, finite_diff, matmul, sample_normal
from .vae import (LossBreakdown, TrainConfig, VaeModel, Variant, build_model, generate,
                  reparameterize, train, vae_loss)
from .wavelets import WaveletKind, wavelet_eval, wavelet_grad

__version__ = "0.1.0"
