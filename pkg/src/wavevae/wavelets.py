"""Mother wavelets used as wavelon activations, with hand-derived derivatives.

All functions are vectorized over numpy arrays and accept scalars.
"""
import enum

import numpy as np

MEXICAN_HAT_NORM = 2.0 / np.sqrt(3.0) * np.pi ** -0.25
MORLET_FREQ = 1.75
SHANNON_SERIES_RADIUS = 1e-4


class WaveletKind(enum.Enum):
    MORLET = "morlet"
    GAUSSIAN = "gaussian"
    MEXICAN_HAT = "mexican_hat"
    SHANNON = "shannon"
    GGW = "ggw"

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower().replace("-", "_").replace(" ", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown wavelet {token!r}; expected one of "
                             f"{[k.value for k in cls]}") from None


def _morlet(x):
    return np.cos(MORLET_FREQ * x) * np.exp(-0.5 * x * x)


def _morlet_grad(x):
    env = np.exp(-0.5 * x * x)
    return -env * (MORLET_FREQ * np.sin(MORLET_FREQ * x) + x * np.cos(MORLET_FREQ * x))


def _gaussian(x):
    return np.exp(-x * x)


def _gaussian_grad(x):
    return -2.0 * x * np.exp(-x * x)


def _mexican_hat(x):
    return MEXICAN_HAT_NORM * (1.0 - x * x) * np.exp(-0.5 * x * x)


def _mexican_hat_grad(x):
    # d/dx (1 - x^2) e^{-x^2/2} = (x^3 - 3x) e^{-x^2/2}
    return MEXICAN_HAT_NORM * (x ** 3 - 3.0 * x) * np.exp(-0.5 * x * x)


def _shannon(x):
    t = np.asarray(x, dtype=np.float64) - 0.5
    near = np.abs(t) < SHANNON_SERIES_RADIUS
    safe = np.where(near, 1.0, t)
    direct = (np.sin(np.pi * safe) - np.sin(2.0 * np.pi * safe)) / (np.pi * safe)
    series = -1.0 + (7.0 * np.pi ** 2 / 6.0) * t * t
    return np.where(near, series, direct)


def _shannon_grad(x):
    t = np.asarray(x, dtype=np.float64) - 0.5
    near = np.abs(t) < SHANNON_SERIES_RADIUS
    safe = np.where(near, 1.0, t)
    num = np.sin(np.pi * safe) - np.sin(2.0 * np.pi * safe)
    dnum = np.pi * np.cos(np.pi * safe) - 2.0 * np.pi * np.cos(2.0 * np.pi * safe)
    direct = dnum / (np.pi * safe) - num / (np.pi * safe * safe)
    series = (7.0 * np.pi ** 2 / 3.0) * t
    return np.where(near, series, direct)


def _ggw(x):
    return np.sin(3.0 * x) + np.sin(0.3 * x) + np.sin(0.03 * x)


def _ggw_grad(x):
    return 3.0 * np.cos(3.0 * x) + 0.3 * np.cos(0.3 * x) + 0.03 * np.cos(0.03 * x)


_TABLE = {
    WaveletKind.MORLET: (_morlet, _morlet_grad),
    WaveletKind.GAUSSIAN: (_gaussian, _gaussian_grad),
    WaveletKind.MEXICAN_HAT: (_mexican_hat, _mexican_hat_grad),
    WaveletKind.SHANNON: (_shannon, _shannon_grad),
    WaveletKind.GGW: (_ggw, _ggw_grad),
}


def wavelet_eval(kind, x):
    kind = WaveletKind.parse(kind)
    out = _TABLE[kind][0](np.asarray(x, dtype=np.float64))
    return float(out) if np.ndim(out) == 0 else out


def wavelet_grad(kind, x):
    kind = WaveletKind.parse(kind)
    out = _TABLE[kind][1](np.asarray(x, dtype=np.float64))
    return float(out) if np.ndim(out) == 0 else out
