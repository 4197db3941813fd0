import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from _gradcheck import numeric_param_grad, rel_error
from wavevae.data import Dataset, make_synthetic
from wavevae.errors import ShapeError, TrainingError
from wavevae.nn import DenseLayer, Network
from wavevae.numkernel import Rng
from wavevae.vae import (ChaoticNoise, GaussianNoise, TrainConfig, VaeModel, Variant, build_model,
                         encode, generate, make_noise, reparameterize, train, vae_loss)

VARIANTS = list(Variant)


def identity_model(f):
    eye = np.eye(f)
    return VaeModel(Network([DenseLayer(eye, np.zeros(f))]), DenseLayer(eye, np.zeros(f)),
                    DenseLayer(np.zeros((f, f)), np.full(f, -60.0)),
                    Network([DenseLayer(eye, np.zeros(f))]), Variant.VAE_MLP)


@pytest.mark.parametrize("variant", VARIANTS)
def test_encode_shapes(variant):
    model = build_model(variant, 5, [6, 4], latent_dim=3, seed=1)
    mu, logvar = encode(model, Rng(0).uniform(35).reshape(7, 5))
    assert mu.shape == logvar.shape == (7, 3)
    assert np.all(np.isfinite(mu)) and np.all(np.isfinite(logvar))


def test_zero_heads_give_prior():
    model = build_model("vae_wnn", 4, [5], latent_dim=2, seed=3)
    for head in (model.mu_head, model.logvar_head):
        head.weights[:] = 0.0
        head.bias[:] = 0.0
    mu, logvar = encode(model, Rng(1).uniform(12).reshape(3, 4))
    assert not np.any(mu) and not np.any(logvar)


def test_duplicated_rows_encode_identically():
    model = build_model("vae_mlp", 3, [4], seed=2)
    x = np.repeat(Rng(5).uniform(3).reshape(1, 3), 4, axis=0)
    mu, _ = encode(model, x)
    assert np.all(mu == mu[0])


def test_encode_shape_error():
    with pytest.raises(ShapeError):
        encode(build_model("vae_mlp", 3, [4], seed=0), np.ones((2, 4)))


def test_reparameterize_examples():
    mu = np.array([[0.3, -1.2]])
    np.testing.assert_allclose(reparameterize(mu, np.full((1, 2), -60.0), np.ones((1, 2))), mu,
                               atol=1e-12)
    e = np.array([[0.7, -0.1]])
    assert np.array_equal(reparameterize(np.zeros((1, 2)), np.zeros((1, 2)), e), e)
    z = reparameterize(np.array([[1.0]]), np.array([[2.0 * np.log(2.0)]]), np.array([[0.5]]))
    assert z[0, 0] == pytest.approx(2.0, abs=1e-15)


def test_reparameterize_shape_error():
    with pytest.raises(ShapeError):
        reparameterize(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3)))


def test_loss_perfect_reconstruction_at_prior():
    x = Rng(0).uniform(12).reshape(3, 4)
    loss = vae_loss(x, x, np.zeros((3, 2)), np.zeros((3, 2)))
    assert (loss.recon, loss.kl, loss.total) == (0.0, 0.0, 0.0)


def test_loss_unit_mean_kl():
    loss = vae_loss(np.zeros((4, 2)), np.zeros((4, 2)), np.ones((4, 1)), np.zeros((4, 1)))
    assert loss.kl == pytest.approx(0.5)
    loss = vae_loss(np.zeros((4, 2)), np.zeros((4, 2)), np.ones((4, 3)), np.zeros((4, 3)))
    assert loss.kl == pytest.approx(1.5)


def test_loss_recon_is_batch_mean_of_row_sums():
    x = np.array([[0.0, 1.0], [1.0, 1.0]])
    x_hat = np.array([[0.5, 0.5], [1.0, 0.0]])
    # row sums 0.5 and 1.0 -> mean 0.75
    assert vae_loss(x, x_hat, np.zeros((2, 1)), np.zeros((2, 1))).recon == pytest.approx(0.75)


def test_loss_rejects_non_finite():
    with pytest.raises(ArithmeticError):
        vae_loss(np.array([[np.nan]]), np.zeros((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)))


finite = st.floats(-8, 8, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, (3, 4), elements=finite), arrays(np.float64, (3, 4), elements=finite))
def test_kl_never_negative(mu, logvar):
    x = np.zeros((3, 1))
    assert vae_loss(x, x, mu, logvar).kl >= 0.0


@pytest.mark.parametrize("variant", VARIANTS)
def test_full_model_gradient(variant):
    rng = Rng(31)
    act = "tanh"
    model = build_model(variant, 3, [4, 3], latent_dim=2, activation=act, wavelet="gaussian",
                        seed=5)
    x = rng.uniform(15).reshape(5, 3)
    eps = rng.normal_matrix(5, 2) if not Variant.parse(variant).chaotic else \
        ChaoticNoise(0.37).draw(5, 2)

    def loss():
        x_hat, mu, logvar, _ = model.forward(x, eps)
        return vae_loss(x, x_hat, mu, logvar).total

    model.loss_and_grads(x, eps)
    worst = 0.0
    for net in model.networks():
        for layer in net.layers:
            for name in layer.param_names:
                analytic = layer.grads[name].copy()
                numeric = numeric_param_grad(loss, getattr(layer, name))
                worst = max(worst, rel_error(analytic, numeric))
    assert worst < 1e-4


@pytest.mark.parametrize("body", ["mlp", "wnn"])
def test_gaussian_and_chaotic_differ_only_in_noise(body):
    a = build_model(f"vae_{body}", 4, [5, 3], seed=9)
    b = build_model(f"cvae_{body}", 4, [5, 3], seed=9)
    x = Rng(2).uniform(24).reshape(6, 4)
    eps = Rng(3).uniform(12).reshape(6, 2)
    out_a, out_b = a.forward(x, eps), b.forward(x, eps)
    for u, v in zip(out_a, out_b):
        assert np.array_equal(u, v)


def test_train_config_rejects_zero_epochs():
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)


def test_train_rejects_wrong_noise():
    model = build_model("cvae_mlp", 3, [4], seed=0)
    with pytest.raises(ValueError):
        train(model, np.zeros((10, 3)), TrainConfig(epochs=1), GaussianNoise(0))


@pytest.mark.parametrize("variant", VARIANTS)
def test_training_is_deterministic(variant):
    x = make_synthetic("separable_gaussians", 200, 4, seed=1).features
    x = (x - x.min(0)) / (x.max(0) - x.min(0))
    histories = []
    for _ in range(2):
        model = build_model(variant, 4, [6, 3], seed=4)
        histories.append(train(model, x, TrainConfig(epochs=5, lr=0.01, seed=8),
                               make_noise(variant, 6, 0.2718)))
    assert histories[0] == histories[1]
    assert len(histories[0]) == 5


def test_divergence_raises_training_error_with_epoch():
    model = build_model("vae_mlp", 3, [4], seed=0)
    x = Rng(1).uniform(60).reshape(20, 3)
    with pytest.raises(TrainingError) as info:
        train(model, x, TrainConfig(epochs=50, lr=1e6, optimizer="sgd", seed=0), GaussianNoise(1))
    assert info.value.epoch is not None


def test_generate_contract():
    ds = make_synthetic("separable_gaussians", 40, 3, seed=2)
    ds = ds.with_features((ds.features - ds.features.min(0)) / np.ptp(ds.features, axis=0))
    model = build_model("vae_wnn", 3, [4], seed=1)
    out = generate(model, ds, GaussianNoise(3))
    assert isinstance(out, Dataset)
    assert out.features.shape == ds.features.shape
    assert np.array_equal(out.labels, ds.labels)
    assert np.all((out.features > 0) & (out.features < 1))


def test_generate_with_identity_model():
    x = Rng(4).uniform(30).reshape(10, 3)
    ds = Dataset(x, np.arange(10) % 2)
    out = generate(identity_model(3), ds, GaussianNoise(0))
    np.testing.assert_allclose(out.features, x, atol=1e-6)
    assert np.array_equal(out.labels, ds.labels)


def test_generate_deterministic_latent_ignores_noise():
    model = build_model("cvae_mlp", 3, [4], seed=3)
    x = Rng(5).uniform(9).reshape(3, 3)
    a = generate(model, x, ChaoticNoise(0.11), deterministic_latent=True)
    b = generate(model, x, ChaoticNoise(0.87), deterministic_latent=True)
    assert np.array_equal(a, b)


def test_chaotic_noise_records_mean():
    noise = ChaoticNoise(0.1234)
    eps = noise.draw(100, 4)
    assert noise.mean == pytest.approx(eps.mean())
    assert np.all((eps >= 0) & (eps <= 1))
