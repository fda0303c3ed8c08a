"""Session segmentation and transfer accounting.

A session is the time window in which one letter is written. It opens when
the smoothed linear-acceleration magnitude first exceeds the start threshold
and closes once the magnitude has stayed at or below it for more than the
hold time, measured from the last above-threshold sample. The emitted trace
is trimmed to end at that last above-threshold sample so the classifier never
sees the trailing quiet padding.

Gating transfer accounting mirrors the two connection styles being compared:
a continuous connection would send every sample, a gated one only the samples
inside sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

from .errors import ConfigError, StreamError, UndefinedSavingsError
from .sensor_model import SensorSample

DEFAULT_START_THRESHOLD = 1.0  # m/s^2
DEFAULT_HOLD_MS = 400.0


@dataclass(frozen=True)
class SessionEvent:
    kind: Literal["start", "end"]
    t_us: int
    trace: tuple[SensorSample, ...] | None = None  # end events only


@dataclass
class TransferLedger:
    """Sample counts a continuous vs. session-gated connection would transfer."""

    continuous_count: int = 0
    gated_count: int = 0

    def savings(self) -> float:
        return savings_percent(self.continuous_count, self.gated_count)


def savings_percent(continuous: float, gated: float) -> float:
    """Percent of transfers avoided by gating: 100 * (continuous - gated) / continuous."""
    if continuous <= 0:
        raise UndefinedSavingsError("savings undefined for zero continuous count")
    return 100.0 * (continuous - gated) / continuous


class SessionDetector:
    """Threshold/hold state machine over one sample stream.

    One instance per stream; feed samples in timestamp order. Events
    alternate start, end, start, ... by construction.
    """

    def __init__(
        self,
        threshold: float = DEFAULT_START_THRESHOLD,
        hold_ms: float = DEFAULT_HOLD_MS,
    ):
        if threshold <= 0:
            raise ConfigError(f"threshold must be > 0, got {threshold}")
        if hold_ms <= 0:
            raise ConfigError(f"hold_ms must be > 0, got {hold_ms}")
        self.threshold = threshold
        self.hold_us = hold_ms * 1000.0
        self.active = False
        self._buffer: list[SensorSample] = []
        self._last_above_idx = -1
        self._last_above_us = 0
        self._last_t_us: Optional[int] = None

    @property
    def quiet_since_us(self) -> Optional[int]:
        """Timestamp quiet time is measured from; None while idle or still moving."""
        if not self.active or self._last_t_us == self._last_above_us:
            return None
        return self._last_above_us

    def feed(self, sample: SensorSample) -> Optional[SessionEvent]:
        if self._last_t_us is not None and sample.t_us <= self._last_t_us:
            raise StreamError(
                f"timestamps must be strictly increasing, got {self._last_t_us} "
                f"then {sample.t_us}"
            )
        self._last_t_us = sample.t_us
        above = sample.linear_accel.norm() > self.threshold

        if not self.active:
            if not above:
                return None
            self.active = True
            self._buffer = [sample]
            self._last_above_idx = 0
            self._last_above_us = sample.t_us
            return SessionEvent("start", sample.t_us)

        self._buffer.append(sample)
        if above:
            self._last_above_idx = len(self._buffer) - 1
            self._last_above_us = sample.t_us
            return None
        if sample.t_us - self._last_above_us > self.hold_us:
            return self._close(sample.t_us)
        return None

    def flush(self) -> Optional[SessionEvent]:
        """Close a session left open at end of stream (trimmed like a normal end)."""
        if not self.active:
            return None
        assert self._last_t_us is not None
        return self._close(self._last_t_us)

    def _close(self, t_us: int) -> SessionEvent:
        trace = tuple(self._buffer[: self._last_above_idx + 1])
        self.active = False
        self._buffer = []
        self._last_above_idx = -1
        return SessionEvent("end", t_us, trace)

    def reset(self) -> None:
        self.active = False
        self._buffer = []
        self._last_above_idx = -1
        self._last_t_us = None


def segment(
    stream: Sequence[SensorSample],
    threshold: float = DEFAULT_START_THRESHOLD,
    hold_ms: float = DEFAULT_HOLD_MS,
    flush: bool = True,
) -> list[SessionEvent]:
    """Run a fresh detector over a finite stream and collect its events."""
    detector = SessionDetector(threshold, hold_ms)
    events = [e for s in stream if (e := detector.feed(s)) is not None]
    if flush and (tail := detector.flush()) is not None:
        events.append(tail)
    return events


def account(
    stream: Sequence[SensorSample],
    threshold: float = DEFAULT_START_THRESHOLD,
    hold_ms: float = DEFAULT_HOLD_MS,
) -> TransferLedger:
    """Count continuous vs. gated transfers over a fully consumed trace.

    A session still open at the end of the stream is counted as if it closed
    there, so a trace that is one long session still gates sensibly.
    """
    events = segment(stream, threshold, hold_ms, flush=True)
    gated = sum(len(e.trace) for e in events if e.kind == "end" and e.trace is not None)
    return TransferLedger(continuous_count=len(stream), gated_count=gated)
