"""Logistic-map noise source used in place of Gaussian latent noise."""
import numpy as np

from .errors import InvalidSeedError

LAMBDA = 4.0
BURN_IN = 100
DEGENERATE_SEEDS = (0.25, 0.5, 0.75)


class LogisticMapStream:
    """Iterates ``x <- 4 x (1 - x)``.

    The first ``BURN_IN`` iterates are discarded so the visible sequence does
    not start right next to the user-chosen seed.
    """

    def __init__(self, seed):
        seed = float(seed)
        if not 0.0 < seed < 1.0 or seed in DEGENERATE_SEEDS:
            raise InvalidSeedError(
                f"chaos seed must lie in (0, 1) and not in {DEGENERATE_SEEDS}, got {seed!r}")
        self.seed = seed
        self.state = seed
        self.iterate_count = 0
        for _ in range(BURN_IN):
            self.state = LAMBDA * (self.state * (1.0 - self.state))
        self.iterate_count = BURN_IN

    @property
    def lam(self):
        return LAMBDA

    def next(self):
        self.state = LAMBDA * (self.state * (1.0 - self.state))
        self.iterate_count += 1
        return self.state

    def fill(self, n):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        out = np.empty(n)
        x = self.state
        for i in range(n):
            x = LAMBDA * (x * (1.0 - x))
            out[i] = x
        self.state = x
        self.iterate_count += n
        return out

    def fill_matrix(self, rows, cols):
        """Row-major block of the next ``rows * cols`` iterates."""
        return self.fill(rows * cols).reshape(rows, cols)


def new_stream(seed):
    return LogisticMapStream(seed)
