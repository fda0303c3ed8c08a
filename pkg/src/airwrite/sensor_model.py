"""Sample types and the weighted moving-average smoothing filter.

The stream unit is a timestamped pair of 3-axis vectors: linear acceleration
(gravity already removed by the sensor stack) and the gravity estimate.
Smoothing uses a causal trailing window so it can run sample-by-sample on a
live stream; the window is truncated and re-normalized at the stream head so
early samples are unbiased rather than zero-padded.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import ConfigError, DataQualityWarning, StreamError

STANDARD_GRAVITY = 9.80665  # m/s^2

Channel = Literal["linear_accel", "gravity", "both"]


@dataclass(frozen=True)
class Vec3:
    """A 3-axis reading in m/s^2. Components must be finite."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise StreamError(f"non-finite vector component: ({self.x}, {self.y}, {self.z})")

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @classmethod
    def from_array(cls, a) -> "Vec3":
        return cls(float(a[0]), float(a[1]), float(a[2]))


@dataclass(frozen=True)
class SensorSample:
    """One stream sample: timestamp in microseconds plus both sensor channels."""

    t_us: int
    linear_accel: Vec3
    gravity: Vec3


def check_monotonic(stream: Sequence[SensorSample]) -> None:
    """Raise StreamError unless timestamps are strictly increasing."""
    for prev, cur in zip(stream, stream[1:]):
        if cur.t_us <= prev.t_us:
            raise StreamError(
                f"timestamps must be strictly increasing, got {prev.t_us} then {cur.t_us}"
            )


def check_gravity_magnitude(stream: Sequence[SensorSample], warmup: int = 10) -> None:
    """Warn (not raise) if gravity magnitude drifts outside [0.5, 1.5] g0 after warm-up."""
    for sample in stream[warmup:]:
        g = sample.gravity.norm()
        if not (0.5 * STANDARD_GRAVITY <= g <= 1.5 * STANDARD_GRAVITY):
            warnings.warn(
                f"gravity magnitude {g:.2f} m/s^2 at t={sample.t_us} is outside "
                f"[0.5, 1.5] standard gravity",
                DataQualityWarning,
                stacklevel=2,
            )
            return


def _default_weights() -> tuple[float, ...]:
    return (1.0, 2.0, 3.0, 4.0, 5.0)


@dataclass(frozen=True)
class FilterSpec:
    """Trailing weighted moving average: `weights[-1]` multiplies the newest sample.

    Weights are normalized to sum to 1 at construction. The default is a
    5-sample linear ramp, which favors recency the way a real-time filter must.
    """

    weights: tuple[float, ...] = field(default_factory=_default_weights)

    def __post_init__(self):
        if len(self.weights) == 0:
            raise ConfigError("filter weights must be non-empty")
        if any(w <= 0 or not math.isfinite(w) for w in self.weights):
            raise ConfigError(f"filter weights must be positive finite, got {self.weights}")
        total = sum(self.weights)
        if abs(total - 1.0) > 1e-12:
            object.__setattr__(self, "weights", tuple(w / total for w in self.weights))

    @property
    def window_length(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, window: int) -> "FilterSpec":
        if window < 1:
            raise ConfigError("window must be >= 1")
        return cls(tuple(1.0 for _ in range(window)))

    @classmethod
    def linear(cls, window: int) -> "FilterSpec":
        if window < 1:
            raise ConfigError("window must be >= 1")
        return cls(tuple(float(i) for i in range(1, window + 1)))


def smooth_values(values: np.ndarray, spec: FilterSpec) -> np.ndarray:
    """Apply the trailing filter along axis 0 of an (n,) or (n, k) array.

    Sample i becomes the weighted sum over rows [i-w+1, i]. For i < w-1 the
    window is truncated to the available head and the kept (most recent)
    weights are re-normalized.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    w = spec.window_length
    weights = np.asarray(spec.weights, dtype=np.float64)
    if n == 0 or w == 1:
        return values.copy()

    out = np.empty_like(values)
    head = min(w - 1, n)
    for i in range(head):
        kept = weights[w - 1 - i :]
        out[i] = kept @ values[: i + 1] / kept.sum()
    if n >= w:
        # steady state: correlate each column with the weight kernel
        if values.ndim == 1:
            out[w - 1 :] = np.convolve(values, weights[::-1], mode="valid")
        else:
            for col in range(values.shape[1]):
                out[w - 1 :, col] = np.convolve(values[:, col], weights[::-1], mode="valid")
    return out


def smooth(
    stream: Sequence[SensorSample],
    spec: FilterSpec | None = None,
    channel: Channel = "both",
) -> list[SensorSample]:
    """Smooth the selected channel(s); timestamps and unselected channels pass through."""
    spec = spec or FilterSpec()
    if channel not in ("linear_accel", "gravity", "both"):
        raise ConfigError(f"unknown channel {channel!r}")
    stream = list(stream)
    check_monotonic(stream)
    if not stream:
        return []

    la = np.array([[s.linear_accel.x, s.linear_accel.y, s.linear_accel.z] for s in stream])
    g = np.array([[s.gravity.x, s.gravity.y, s.gravity.z] for s in stream])
    if channel in ("linear_accel", "both"):
        la = smooth_values(la, spec)
    if channel in ("gravity", "both"):
        g = smooth_values(g, spec)
    return [
        SensorSample(s.t_us, Vec3.from_array(la[i]), Vec3.from_array(g[i]))
        for i, s in enumerate(stream)
    ]


class StreamingSmoother:
    """Incremental form of `smooth` for live connections.

    Feeding the same samples one-by-one reproduces the batch output (same
    head truncation rules), so batch and streaming paths stay interchangeable.
    """

    def __init__(self, spec: FilterSpec | None = None, channel: Channel = "both"):
        self.spec = spec or FilterSpec()
        self.channel = channel
        w = self.spec.window_length
        self._la: deque[np.ndarray] = deque(maxlen=w)
        self._g: deque[np.ndarray] = deque(maxlen=w)
        self._weights = np.asarray(self.spec.weights)
        self._last_t: int | None = None

    def feed(self, sample: SensorSample) -> SensorSample:
        if self._last_t is not None and sample.t_us <= self._last_t:
            raise StreamError(
                f"timestamps must be strictly increasing, got {self._last_t} then {sample.t_us}"
            )
        self._last_t = sample.t_us
        self._la.append(sample.linear_accel.as_array())
        self._g.append(sample.gravity.as_array())

        la = sample.linear_accel
        g = sample.gravity
        if self.channel in ("linear_accel", "both"):
            la = Vec3.from_array(self._window_mean(self._la))
        if self.channel in ("gravity", "both"):
            g = Vec3.from_array(self._window_mean(self._g))
        return SensorSample(sample.t_us, la, g)

    def _window_mean(self, window: deque) -> np.ndarray:
        kept = self._weights[self._weights.shape[0] - len(window) :]
        return kept @ np.stack(tuple(window)) / kept.sum()

    def reset(self) -> None:
        self._la.clear()
        self._g.clear()
        self._last_t = None


def stream_from_arrays(
    t_us: Iterable[int], linear_accel: np.ndarray, gravity: np.ndarray
) -> list[SensorSample]:
    """Build a sample stream from parallel arrays (synthesis and test helper)."""
    return [
        SensorSample(int(t), Vec3.from_array(la), Vec3.from_array(g))
        for t, la, g in zip(t_us, linear_accel, gravity)
    ]
