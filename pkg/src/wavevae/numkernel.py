"""Dense float64 helpers, a seeded counter-based RNG and a central-difference oracle.

Everything random in the package draws from :class:`Rng`, so an experiment is
reproducible from its integer seeds alone.
"""
import numpy as np

from .errors import NumericError, ShapeError

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def as_matrix(values, name="matrix"):
    """Coerce to a C-contiguous 2-D float64 array, rejecting non-finite entries."""
    m = np.ascontiguousarray(values, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError(f"{name} contains non-finite values")
    return m


def matmul(a, b):
    """Matrix product summed in ascending inner index.

    The accumulation order is fixed (``acc += a[i, k] * b[k, j]`` for k = 0, 1, ...),
    so the result is bit-identical to a naive triple loop on every platform.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]))
    for k in range(a.shape[1]):
        out += a[:, k:k + 1] * b[k:k + 1, :]
    return out


def _splitmix(counters):
    z = counters * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class Rng:
    """Counter-based 64-bit generator (splitmix64 over ``seed + counter``).

    Two instances built from the same seed emit the same stream. The state is
    just ``(seed, counter)``; the period is 2**64 draws.
    """

    def __init__(self, seed=0):
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self.seed = seed & _MASK64
        self.counter = 0

    def __repr__(self):
        return f"Rng(seed={self.seed}, counter={self.counter})"

    def raw(self, n):
        """Return ``n`` raw 64-bit words and advance the counter."""
        n = int(n)
        start = (self.seed + self.counter + 1) & _MASK64
        idx = np.arange(n, dtype=np.uint64)
        with np.errstate(over="ignore"):
            words = _splitmix(idx + np.uint64(start))
        self.counter += n
        return words

    def uniform(self, n):
        """``n`` floats in (0, 1]; never exactly zero, so ``log`` is always safe."""
        words = self.raw(n) >> np.uint64(11)
        return (words.astype(np.float64) + 1.0) * 2.0 ** -53

    def normal(self, n):
        return sample_normal(self, n)

    def normal_matrix(self, rows, cols):
        return sample_normal(self, rows * cols).reshape(rows, cols)

    def permutation(self, n):
        """Seed-deterministic random permutation of ``range(n)``."""
        if n == 0:
            return np.zeros(0, dtype=np.int64)
        return np.argsort(self.uniform(n), kind="stable")

    def integers(self, high, n):
        """``n`` integers uniform on ``[0, high)``."""
        return np.minimum((self.uniform(n) * high).astype(np.int64), high - 1)

    def spawn(self, salt):
        """Independent child generator derived from this seed and ``salt``."""
        mixed = _splitmix(np.array([(self.seed ^ (int(salt) * 0x632BE59BD9B4E019)) & _MASK64],
                                   dtype=np.uint64))
        return Rng(int(mixed[0]))


def sample_normal(rng, n):
    """Draw ``n`` standard normals with the paired-trigonometric (Box-Muller) transform."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    pairs = (n + 1) // 2
    u = rng.uniform(2 * pairs)
    radius = np.sqrt(-2.0 * np.log(u[:pairs]))
    angle = 2.0 * np.pi * u[pairs:]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:n]


def finite_diff(func, point, step=1e-5):
    """Central-difference gradient of a scalar function at ``point``."""
    if not step > 0:
        raise ValueError("step must be positive")
    x = np.array(point, dtype=np.float64)
    flat = x.reshape(-1)
    grad = np.empty_like(flat)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + step
        f_plus = float(func(x))
        flat[i] = orig - step
        f_minus = float(func(x))
        flat[i] = orig
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise NumericError(f"function is non-finite near component {i}")
        grad[i] = (f_plus - f_minus) / (2.0 * step)
    return grad.reshape(x.shape)
