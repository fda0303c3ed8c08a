"""End-to-end composition: filter -> session gate -> rotation -> classification.

The split mirrors the two halves of the original system: smoothing, angle
tracking and session gating belong to the watch side; rotation and
classification to the host side. Here both run in one process with the
session boundary as the hand-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Callable, Iterable, Literal, Optional, Sequence

from .classifier import Prediction, SessionTraceMatrix, TemplateSet, classify
from .errors import ConfigError
from .orientation import angle_from_sample, rotate_frame
from .sensor_model import FilterSpec, SensorSample, StreamingSmoother, smooth
from .session import DEFAULT_HOLD_MS, DEFAULT_START_THRESHOLD, SessionDetector

AngleMode = Literal["per_sample", "frozen"]


@dataclass(frozen=True)
class PipelineConfig:
    filter_weights: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0, 5.0)
    smooth_channel: str = "both"
    threshold: float = DEFAULT_START_THRESHOLD
    hold_ms: float = DEFAULT_HOLD_MS
    angle_mode: AngleMode = "per_sample"
    band_fraction: Optional[float] = None

    def __post_init__(self):
        if self.smooth_channel not in ("linear_accel", "gravity", "both"):
            raise ConfigError(f"unknown smooth_channel {self.smooth_channel!r}")
        if self.angle_mode not in ("per_sample", "frozen"):
            raise ConfigError(f"unknown angle_mode {self.angle_mode!r}")
        if self.threshold <= 0 or self.hold_ms <= 0:
            raise ConfigError("threshold and hold_ms must be > 0")
        if self.band_fraction is not None and not (0 < self.band_fraction <= 1):
            raise ConfigError("band_fraction must be in (0, 1]")

    @property
    def filter_spec(self) -> FilterSpec:
        return FilterSpec(tuple(self.filter_weights))

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "filter_weights" in raw:
            raw = dict(raw, filter_weights=tuple(raw["filter_weights"]))
        return cls(**raw)


def rotate_session(trace: Sequence[SensorSample], config: PipelineConfig) -> SessionTraceMatrix:
    """Rotate a session's samples into the arm-angle-free frame.

    per_sample recomputes the angle from each sample's (smoothed) gravity;
    frozen uses the angle at the session's first sample throughout.
    """
    if config.angle_mode == "frozen":
        angle = angle_from_sample(trace[0])
        rotated = [rotate_frame(s, angle) for s in trace]
    else:
        rotated = [rotate_frame(s, angle_from_sample(s)) for s in trace]
    return SessionTraceMatrix.from_rotated(rotated)


@dataclass(frozen=True)
class SessionResult:
    index: int
    t_start_us: int
    t_end_us: int
    matrix: SessionTraceMatrix
    prediction: Optional[Prediction] = None


def run_pipeline(
    stream: Sequence[SensorSample],
    config: PipelineConfig = PipelineConfig(),
    templates: Optional[TemplateSet] = None,
    flush: bool = True,
) -> list[SessionResult]:
    """Process a finite trace and return one result per detected session."""
    smoothed = smooth(stream, config.filter_spec, config.smooth_channel)
    detector = SessionDetector(config.threshold, config.hold_ms)
    results: list[SessionResult] = []
    pending_start: Optional[int] = None

    def close(event) -> None:
        if len(event.trace) < 2:
            return  # an isolated spike is not a writing session
        matrix = rotate_session(event.trace, config)
        prediction = classify(templates, matrix, config.band_fraction) if templates else None
        results.append(
            SessionResult(
                index=len(results),
                t_start_us=pending_start if pending_start is not None else event.trace[0].t_us,
                t_end_us=event.trace[-1].t_us,
                matrix=matrix,
                prediction=prediction,
            )
        )

    for sample in smoothed:
        event = detector.feed(sample)
        if event is None:
            continue
        if event.kind == "start":
            pending_start = event.t_us
        else:
            close(event)
            pending_start = None
    if flush and (tail := detector.flush()) is not None:
        close(tail)
    return results


def single_session_matrix(
    stream: Sequence[SensorSample],
    config: PipelineConfig = PipelineConfig(),
    label: Optional[str] = None,
) -> SessionTraceMatrix:
    """Pipeline a trace that must contain exactly one session (training helper)."""
    from dataclasses import replace

    from .errors import AmbiguousTrainingError

    results = run_pipeline(stream, config)
    if len(results) != 1:
        raise AmbiguousTrainingError(
            f"expected exactly one writing session, found {len(results)}"
        )
    matrix = results[0].matrix
    return replace(matrix, label=label) if label is not None else matrix


class StreamingPipeline:
    """Sample-at-a-time pipeline for live connections.

    feed() returns zero or more events: ("start", t_us) when a session opens
    and ("end", t_us, SessionTraceMatrix) when one closes. A session whose
    trimmed trace is a single isolated spike closes with a None matrix.
    Classification is left to the caller, which owns the template store.
    """

    def __init__(self, config: PipelineConfig = PipelineConfig()):
        self.config = config
        self._smoother = StreamingSmoother(config.filter_spec, config.smooth_channel)
        self._detector = SessionDetector(config.threshold, config.hold_ms)

    def feed(self, sample: SensorSample) -> list[tuple]:
        smoothed = self._smoother.feed(sample)
        event = self._detector.feed(smoothed)
        if event is None:
            return []
        if event.kind == "start":
            return [("start", event.t_us)]
        if len(event.trace) < 2:
            return [("end", event.t_us, None)]
        return [("end", event.t_us, rotate_session(event.trace, self.config))]
