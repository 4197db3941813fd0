"""Exception types shared across the package."""


class WaveVAEError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(WaveVAEError, ValueError):
    pass


class NumericError(WaveVAEError, ArithmeticError):
    pass


class StateError(WaveVAEError, RuntimeError):
    pass


class InvalidSeedError(WaveVAEError, ValueError):
    pass


class TrainingError(WaveVAEError, RuntimeError):
    """Raised when a loss goes non-finite. ``epoch`` holds the failing epoch index."""

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class DataError(WaveVAEError, ValueError):
    """CSV parse, label, format and stratification problems."""


class ConfigError(WaveVAEError, ValueError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class StageError(WaveVAEError, RuntimeError):
    """Wraps a failure inside an attack pipeline with the stage it happened in."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
