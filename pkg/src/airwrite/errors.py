"""Exception types shared across the pipeline."""


class AirwriteError(Exception):
    """Base class for all package errors."""


class ConfigError(AirwriteError):
    """Invalid configuration value (bad filter weights, unknown config key, ...)."""


class StreamError(AirwriteError):
    """Malformed sample stream: out-of-order timestamps or non-finite values."""


class TraceFormatError(StreamError):
    """A trace file failed validation. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateGravityError(AirwriteError):
    """Gravity vector norm is too small to orient against (free fall or bad data)."""


class IndeterminateAngleError(AirwriteError):
    """Gravity lies along the device z-axis; the arm angle is undefined."""


class EmptyInputError(AirwriteError):
    """An operation that needs at least one sample received none."""


class AlphabetError(AirwriteError):
    """Letter label outside the active alphabet."""


class NotTrainedError(AirwriteError):
    """Classification requested before every alphabet letter has a template."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("missing templates for: " + ", ".join(self.missing))


class SynthesisError(AirwriteError):
    """Stroke path or synthesis spec cannot produce a trace."""


class AmbiguousTrainingError(AirwriteError):
    """A training trace did not contain exactly one writing session."""


class UndefinedSavingsError(AirwriteError):
    """Transfer savings requested with a zero continuous count."""


class IncompleteExperimentError(AirwriteError):
    """Confusion matrix has an empty row; accuracy is undefined."""


class DataQualityWarning(UserWarning):
    """Non-fatal data oddity (gravity magnitude off, strong wrist roll)."""
