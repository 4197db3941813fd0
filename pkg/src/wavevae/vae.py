"""Variational autoencoders with dense (MLP) or wavelet (Deep-WNN) encoder/decoder,
and Gaussian or logistic-map latent noise.

The training objective minimized here is ``recon + kl``, i.e. the negated ELBO
with a squared-error reconstruction term.
"""
import enum
from dataclasses import dataclass, field

import numpy as np

from .chaos import LogisticMapStream
from .errors import NumericError, ShapeError, TrainingError
from .nn import DenseLayer, Network, Optimizer, build_mlp, build_wnn, optimizer_step
from .numkernel import Rng


class Variant(enum.Enum):
    VAE_MLP = "vae_mlp"
    VAE_WNN = "vae_wnn"
    CVAE_MLP = "cvae_mlp"
    CVAE_WNN = "cvae_wnn"

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            raise ValueError(f"unknown generator {token!r}; expected one of "
                             f"{[v.value for v in cls]}") from None

    @property
    def chaotic(self):
        return self in (Variant.CVAE_MLP, Variant.CVAE_WNN)

    @property
    def wavelet(self):
        return self in (Variant.VAE_WNN, Variant.CVAE_WNN)

    @property
    def label(self):
        return {Variant.VAE_MLP: "VAE-MLP", Variant.VAE_WNN: "VAE-Deep-WNN",
                Variant.CVAE_MLP: "C-VAE-MLP", Variant.CVAE_WNN: "C-VAE-Deep-WNN"}[self]


class GaussianNoise:
    kind = "gaussian"

    def __init__(self, seed):
        self.rng = Rng(seed)

    def draw(self, rows, cols):
        return self.rng.normal_matrix(rows, cols)


class ChaoticNoise:
    """Raw logistic-map iterates in (0, 1), consumed row-major. Not recentered."""

    kind = "chaotic"

    def __init__(self, seed):
        self.stream = LogisticMapStream(seed)
        self.total = 0.0
        self.count = 0

    def draw(self, rows, cols):
        eps = self.stream.fill_matrix(rows, cols)
        self.total += float(eps.sum())
        self.count += eps.size
        return eps

    @property
    def mean(self):
        return self.total / self.count if self.count else float("nan")


def make_noise(variant, seed, chaos_seed):
    variant = Variant.parse(variant)
    return ChaoticNoise(chaos_seed) if variant.chaotic else GaussianNoise(seed)


@dataclass
class LossBreakdown:
    recon: float
    kl: float

    @property
    def total(self):
        return self.recon + self.kl


@dataclass
class TrainConfig:
    epochs: int = 200
    lr: float = 0.01
    momentum: float = 0.0
    optimizer: str = "adam"
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if int(self.epochs) < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not self.lr > 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if int(self.batch_size) < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass
class VaeModel:
    encoder: Network
    mu_head: DenseLayer
    logvar_head: DenseLayer
    decoder: Network
    variant: Variant = Variant.VAE_MLP
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        width = self.encoder.out_dim
        if self.mu_head.in_dim != width or self.logvar_head.in_dim != width:
            raise ShapeError("latent heads must take the encoder output width")
        if self.mu_head.out_dim != self.logvar_head.out_dim:
            raise ShapeError("mu and logvar heads must agree on latent_dim")
        if self.decoder.in_dim != self.latent_dim:
            raise ShapeError("decoder input width must equal latent_dim")
        if self.decoder.out_dim != self.n_features:
            raise ShapeError("decoder output width must equal the feature count")
        self._heads = (Network([self.mu_head]), Network([self.logvar_head]))

    @property
    def latent_dim(self):
        return self.mu_head.out_dim

    @property
    def n_features(self):
        return self.encoder.in_dim

    @property
    def noise_kind(self):
        return "chaotic" if self.variant.chaotic else "gaussian"

    def networks(self):
        return [self.encoder, *self._heads, self.decoder]

    def encode(self, x, keep_cache=False):
        h = self.encoder.forward(x, keep_cache=keep_cache)
        return (self.mu_head.forward(h, keep_cache=keep_cache),
                self.logvar_head.forward(h, keep_cache=keep_cache))

    def decode(self, z, keep_cache=False):
        return self.decoder.forward(z, keep_cache=keep_cache)

    def forward(self, x, eps, keep_cache=False):
        """Full pass with externally supplied latent noise; returns (x_hat, mu, logvar, z)."""
        mu, logvar = self.encode(x, keep_cache=keep_cache)
        z = reparameterize(mu, logvar, eps)
        return self.decode(z, keep_cache=keep_cache), mu, logvar, z

    def loss_and_grads(self, x, eps):
        """Forward + backward on one batch. Gradients land in each layer's ``grads``."""
        x = np.asarray(x, dtype=np.float64)
        x_hat, mu, logvar, _ = self.forward(x, eps, keep_cache=True)
        loss = vae_loss(x, x_hat, mu, logvar)
        n = x.shape[0]
        sigma = np.exp(0.5 * logvar)
        d_xhat = -2.0 * (x - x_hat) / n
        d_z = self.decoder.backward(d_xhat)
        d_mu = d_z + mu / n
        d_logvar = d_z * eps * 0.5 * sigma + 0.5 * (sigma * sigma - 1.0) / n
        d_h = self.mu_head.backward(d_mu) + self.logvar_head.backward(d_logvar)
        self.encoder.backward(d_h)
        return loss


def build_model(variant, n_features, hidden_layers=(16, 8), latent_dim=2, activation="relu",
                wavelet="morlet", seed=0):
    """Encoder over ``[f, *hidden]``, mirrored decoder, sigmoid output of width ``f``."""
    variant = Variant.parse(variant)
    hidden = [int(h) for h in hidden_layers]
    if not hidden:
        raise ValueError("at least one hidden layer is required")
    rng = Rng(seed)
    enc_sizes = [n_features, *hidden]
    dec_sizes = [latent_dim, *reversed(hidden)]
    if variant.wavelet:
        encoder = build_wnn(enc_sizes, rng, wavelet)
        decoder_body = build_wnn(dec_sizes, rng, wavelet).layers
    else:
        encoder = build_mlp(enc_sizes, rng, activation)
        decoder_body = build_mlp(dec_sizes, rng, activation).layers
    mu_head = DenseLayer.init(hidden[-1], latent_dim, rng, "identity")
    logvar_head = DenseLayer.init(hidden[-1], latent_dim, rng, "identity")
    out = DenseLayer.init(hidden[0], n_features, rng, "sigmoid")
    decoder = Network([*decoder_body, out])
    meta = {"hidden_layers": hidden, "latent_dim": latent_dim, "init_seed": seed,
            "wavelet": wavelet if variant.wavelet else None,
            "activation": None if variant.wavelet else activation}
    return VaeModel(encoder, mu_head, logvar_head, decoder, variant, meta)


def encode(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_features or x.shape[0] < 1:
        raise ShapeError(f"expected (rows >= 1, {model.n_features}) input, got {x.shape}")
    return model.encode(x)


def reparameterize(mu, logvar, eps):
    mu = np.asarray(mu, dtype=np.float64)
    logvar = np.asarray(logvar, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if not (mu.shape == logvar.shape == eps.shape):
        raise ShapeError(f"mu {mu.shape}, logvar {logvar.shape} and eps {eps.shape} must match")
    return mu + np.exp(0.5 * logvar) * eps


def vae_loss(x, x_hat, mu, logvar):
    x, x_hat = np.asarray(x, dtype=np.float64), np.asarray(x_hat, dtype=np.float64)
    mu, logvar = np.asarray(mu, dtype=np.float64), np.asarray(logvar, dtype=np.float64)
    if x.shape != x_hat.shape:
        raise ShapeError(f"x {x.shape} and x_hat {x_hat.shape} differ")
    if mu.shape != logvar.shape:
        raise ShapeError(f"mu {mu.shape} and logvar {logvar.shape} differ")
    for name, arr in (("x", x), ("x_hat", x_hat), ("mu", mu), ("logvar", logvar)):
        if not np.all(np.isfinite(arr)):
            raise NumericError(f"{name} contains non-finite values")
    n = x.shape[0]
    recon = float(np.sum((x - x_hat) ** 2) / n)
    # 1 + lv - e^lv <= 0 termwise; the clip only removes rounding noise
    kl = float(max(-0.5 * np.sum(1.0 + logvar - mu * mu - np.exp(logvar)) / n, 0.0))
    return LossBreakdown(recon, kl)


def train(model, features, cfg, noise):
    """Minibatch training; returns the per-epoch mean total loss as a list.

    Each epoch reshuffles the rows, draws one latent-noise block per minibatch
    from ``noise`` and takes one optimizer step per minibatch.
    """
    x_all = np.asarray(features, dtype=np.float64)
    if x_all.ndim != 2 or x_all.shape[1] != model.n_features:
        raise ShapeError(f"expected (*, {model.n_features}) features, got {x_all.shape}")
    if noise.kind != model.noise_kind:
        raise ValueError(f"{model.variant.value} needs {model.noise_kind} noise, got {noise.kind}")
    shuffle_rng = Rng(cfg.seed)
    opt = Optimizer(cfg.optimizer, cfg.lr, cfg.momentum)
    networks = model.networks()
    n = x_all.shape[0]
    bs = int(cfg.batch_size)
    history = []
    for epoch in range(int(cfg.epochs)):
        order = shuffle_rng.permutation(n)
        total = 0.0
        for start in range(0, n, bs):
            batch = x_all[order[start:start + bs]]
            eps = noise.draw(batch.shape[0], model.latent_dim)
            with np.errstate(over="ignore", invalid="ignore"):
                try:
                    loss = model.loss_and_grads(batch, eps)
                except NumericError as exc:
                    raise TrainingError(f"training diverged at epoch {epoch}: {exc}", epoch) from exc
            if not np.isfinite(loss.total):
                raise TrainingError(f"training diverged at epoch {epoch}", epoch)
            total += loss.total * batch.shape[0]
            optimizer_step(opt, networks)
        history.append(total / n)
    for net in networks:
        for layer in net.layers:
            layer.clear_cache()
    return history


def generate(model, source, noise, deterministic_latent=False):
    """Encode, resample the latent code and decode every row (row order kept).

    ``source`` may be a Dataset, in which case a Dataset with the same labels
    is returned, or a plain feature matrix.
    """
    features = getattr(source, "features", source)
    x = np.asarray(features, dtype=np.float64)
    mu, logvar = encode(model, x)
    if deterministic_latent:
        z = mu
    else:
        z = reparameterize(mu, logvar, noise.draw(*mu.shape))
    out = model.decode(z)
    if hasattr(source, "with_features"):
        return source.with_features(out)
    return out
