"""Synthetic sensor traces from 2-D letter stroke paths.

This is the stand-in for a human writing in the air with a watch on: a
letter is a set of pen strokes in a unit box, traversed with a smoothstep
velocity profile (zero velocity at stroke ends), with short travel moves
between strokes. Acceleration comes from central second differences of the
resulting position series, the vertical component is split across the device
x/y axes by the configured arm angle, the horizontal component lands on z
untouched, gravity is pinned to the same arm angle, and optional white noise
is added to every channel. The inverse mapping is exactly what the
orientation module undoes, which makes these traces a ground-truth oracle
for the whole pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import SynthesisError
from .sensor_model import STANDARD_GRAVITY, SensorSample, stream_from_arrays

INCH = 0.0254  # meters

ThetaSpec = Union[float, tuple[float, float]]


@dataclass(frozen=True)
class StrokePath:
    """Pen trajectory of one letter: polylines in a unit box, y pointing up.

    dwell_ms is the pen-up travel time between consecutive strokes; it is kept
    well under the session hold time so multi-stroke letters stay in one
    session.
    """

    strokes: tuple[np.ndarray, ...]
    letter: Optional[str] = None
    dwell_ms: float = 150.0

    def __post_init__(self):
        if not self.strokes:
            raise SynthesisError("a stroke path needs at least one stroke")
        converted = []
        for stroke in self.strokes:
            pts = np.asarray(stroke, dtype=np.float64)
            if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
                raise SynthesisError("each stroke must be a polyline of >= 2 (x, y) points")
            if not np.all(np.isfinite(pts)):
                raise SynthesisError("stroke coordinates must be finite")
            converted.append(pts)
        object.__setattr__(self, "strokes", tuple(converted))

    def arc_lengths(self) -> list[float]:
        return [float(np.sum(np.linalg.norm(np.diff(s, axis=0), axis=1))) for s in self.strokes]

    def start_point(self) -> np.ndarray:
        return self.strokes[0][0]

    def end_point(self) -> np.ndarray:
        return self.strokes[-1][-1]


@dataclass(frozen=True)
class SynthSpec:
    """Knobs for one synthesized writing: scale, timing, pose, noise, seed."""

    letter_size: float = 12 * INCH  # meters; 6 inches reproduces the small-letter runs
    sample_rate: float = 100.0  # Hz
    duration: float = 1.5  # seconds of pen-down writing per letter
    noise_sigma: float = 0.0  # m/s^2, i.i.d. Gaussian on every channel
    arm_theta: ThetaSpec = 0.0  # radians; a (start, end) pair sweeps linearly over the trace
    rng_seed: int = 0
    quiet_ms: float = 700.0  # stationary padding before and after the writing

    def __post_init__(self):
        if self.letter_size <= 0:
            raise SynthesisError(f"letter_size must be > 0, got {self.letter_size}")
        if self.sample_rate <= 0:
            raise SynthesisError(f"sample_rate must be > 0, got {self.sample_rate}")
        if self.duration <= 0:
            raise SynthesisError(f"duration must be > 0, got {self.duration}")
        if self.noise_sigma < 0:
            raise SynthesisError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.quiet_ms < 0:
            raise SynthesisError(f"quiet_ms must be >= 0, got {self.quiet_ms}")


def _smoothstep(u: np.ndarray) -> np.ndarray:
    return u * u * (3.0 - 2.0 * u)


def _point_along(stroke: np.ndarray, arc: np.ndarray) -> np.ndarray:
    """Positions at the given arc lengths along a polyline."""
    seg = np.linalg.norm(np.diff(stroke, axis=0), axis=1)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    arc = np.clip(arc, 0.0, cum[-1])
    x = np.interp(arc, cum, stroke[:, 0])
    y = np.interp(arc, cum, stroke[:, 1])
    return np.stack([x, y], axis=1)


def _polyline_arc(points: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


_CORNER_COS = math.cos(math.radians(50.0))
_MAX_UNIT_EDGE = 0.3  # unit-box length above which a straight edge is subdivided
_MAX_UNIT_ARC = 1.0  # unit-box arc above which a unit is bisected at mid-arc


def _split_long_units(unit: np.ndarray) -> list[np.ndarray]:
    """Bisect a unit at the vertex nearest half-arc until it is short enough.

    One smoothstep stretched over a very long unit (a full circle, say) moves
    so slowly that at the small letter size the whole unit can sit below the
    session start threshold.
    """
    seg = np.linalg.norm(np.diff(unit, axis=0), axis=1)
    if seg.sum() <= _MAX_UNIT_ARC or len(unit) < 3:
        return [unit]
    cum = np.cumsum(seg)
    k = int(np.argmin(np.abs(cum - cum[-1] / 2.0))) + 1
    k = min(max(k, 1), len(unit) - 2)
    return _split_long_units(unit[: k + 1]) + _split_long_units(unit[k:])


def _motion_units(stroke: np.ndarray) -> list[np.ndarray]:
    """Split one polyline into pen-down motion units.

    The pen stops at sharp corners (turn > 50 degrees) and at even
    subdivisions of straight edges longer than _MAX_UNIT_EDGE. Without the
    subdivision, a long straight run traversed at near-constant speed sits
    below the session start threshold long enough to split the letter into
    two sessions. Curve approximations (many short, gently turning edges)
    stay single units.
    """
    pts: list[np.ndarray] = [np.asarray(stroke[0], dtype=float)]
    stop = [False]
    prev_dir = None
    for i in range(len(stroke) - 1):
        a = np.asarray(stroke[i], dtype=float)
        b = np.asarray(stroke[i + 1], dtype=float)
        seg = b - a
        length = float(np.hypot(seg[0], seg[1]))
        if length == 0.0:
            continue
        direction = seg / length
        if prev_dir is not None and float(prev_dir @ direction) < _CORNER_COS:
            stop[-1] = True
        parts = max(math.ceil(length / _MAX_UNIT_EDGE), 1)
        for k in range(1, parts + 1):
            pts.append(a + (k / parts) * seg)
            stop.append(k < parts)
        prev_dir = direction
    units: list[np.ndarray] = []
    start = 0
    for idx in range(1, len(pts)):
        if stop[idx] or idx == len(pts) - 1:
            if idx > start:
                units.append(np.stack(pts[start : idx + 1]))
            start = idx
    return [piece for unit in units for piece in _split_long_units(unit)]


def motion_positions(path: StrokePath, spec: SynthSpec) -> np.ndarray:
    """Unit-box pen positions over the letter's motion window at the sample rate.

    Strokes split into motion units at sharp corners and along long straight
    edges; pen-down time (`spec.duration`) is allocated across units in
    proportion to the square root of arc length, which equalizes peak
    acceleration across units. Each unit and each inter-stroke travel is
    traversed with a smoothstep profile, so velocity is zero at every joint.
    """
    dwell_s = path.dwell_ms / 1000.0
    stroke_units: list[list[np.ndarray]] = []
    for i, stroke in enumerate(path.strokes):
        units = _motion_units(np.asarray(stroke, dtype=float))
        if not units:
            raise SynthesisError(f"stroke {i} has zero length")
        stroke_units.append(units)
    weights = [math.sqrt(_polyline_arc(u)) for units in stroke_units for u in units]
    wsum = sum(weights)

    # (kind, start_time, duration, payload)
    segments: list[tuple[str, float, float, object]] = []
    t = 0.0
    k = 0
    for i, units in enumerate(stroke_units):
        if i > 0:
            prev_end = np.asarray(path.strokes[i - 1][-1], dtype=float)
            segments.append(("travel", t, dwell_s, (prev_end, units[0][0])))
            t += dwell_s
        for unit in units:
            span = spec.duration * weights[k] / wsum
            segments.append(("stroke", t, span, unit))
            t += span
            k += 1

    dt = 1.0 / spec.sample_rate
    n = int(math.floor(t / dt)) + 1
    times = np.arange(n) * dt
    pos = np.empty((n, 2))
    for kind, t0, span, payload in segments:
        mask = (times >= t0) & (times <= t0 + span + 1e-12)
        u = np.clip((times[mask] - t0) / span, 0.0, 1.0)
        s = _smoothstep(u)
        if kind == "stroke":
            stroke = payload  # type: ignore[assignment]
            arc = s * _polyline_arc(stroke)
            pos[mask] = _point_along(stroke, arc)
        else:
            a, b = payload  # type: ignore[misc]
            pos[mask] = a + s[:, None] * (b - a)
    return pos


def _second_difference(pos: np.ndarray, rate: float) -> np.ndarray:
    """Central second differences with two constant samples padded on each side."""
    padded = np.concatenate([pos[:1], pos[:1], pos, pos[-1:], pos[-1:]], axis=0)
    acc = (padded[2:] - 2 * padded[1:-1] + padded[:-2]) * rate * rate
    return acc[1:-1]


def _theta_series(theta: ThetaSpec, n: int) -> np.ndarray:
    if isinstance(theta, tuple):
        lo, hi = theta
        return np.linspace(lo, hi, n)
    return np.full(n, float(theta))


def _assemble(accel_unit: np.ndarray, spec: SynthSpec) -> list[SensorSample]:
    """Map unit (horizontal, vertical) acceleration onto device axes and add gravity/noise."""
    n = accel_unit.shape[0]
    a_h = accel_unit[:, 0] * spec.letter_size  # left/right -> device z
    a_v = accel_unit[:, 1] * spec.letter_size  # up/down -> world y
    theta = _theta_series(spec.arm_theta, n)
    sin_t, cos_t = np.sin(theta), np.cos(theta)

    la = np.stack([-a_v * sin_t, a_v * cos_t, a_h], axis=1)
    g = np.stack(
        [-STANDARD_GRAVITY * sin_t, -STANDARD_GRAVITY * cos_t, np.zeros(n)], axis=1
    )
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.rng_seed)
        la = la + rng.normal(0.0, spec.noise_sigma, (n, 3))
        g = g + rng.normal(0.0, spec.noise_sigma, (n, 3))

    t_us = [round(i * 1e6 / spec.sample_rate) for i in range(n)]
    return stream_from_arrays(t_us, la, g)


def _quiet_block(spec: SynthSpec, ms: float) -> np.ndarray:
    n = int(round(ms / 1000.0 * spec.sample_rate))
    return np.zeros((n, 2))


def synthesize(path: StrokePath, spec: SynthSpec) -> list[SensorSample]:
    """Full trace for one letter: quiet lead-in, the writing, quiet tail."""
    motion = _second_difference(motion_positions(path, spec), spec.sample_rate)
    quiet = _quiet_block(spec, spec.quiet_ms)
    accel = np.concatenate([quiet, motion, quiet], axis=0)
    return _assemble(accel, spec)


def synthesize_word(
    word: str, spec: SynthSpec, gap_ms: float = 1000.0, paths: Optional[dict] = None
) -> list[SensorSample]:
    """Concatenate per-letter writings separated by stationary gaps of gap_ms."""
    if gap_ms < 0:
        raise SynthesisError(f"gap_ms must be >= 0, got {gap_ms}")
    library = paths if paths is not None else letter_paths()
    blocks = [_quiet_block(spec, spec.quiet_ms)]
    for i, ch in enumerate(word):
        if ch not in library:
            raise SynthesisError(f"no stroke path for character {ch!r}")
        if i > 0:
            blocks.append(_quiet_block(spec, gap_ms))
        blocks.append(_second_difference(motion_positions(library[ch], spec), spec.sample_rate))
    blocks.append(_quiet_block(spec, spec.quiet_ms))
    if len(blocks) == 2:  # empty word: just the two quiet pads collapse to nothing
        return []
    return _assemble(np.concatenate(blocks, axis=0), spec)


def oscillation_path(cycles: int = 4, x: float = 0.5, lo: float = 0.1, hi: float = 0.9) -> StrokePath:
    """Vertical up/down zigzag, the frame-rotation demo scenario."""
    pts = [(x, lo)]
    for _ in range(cycles):
        pts.append((x, hi))
        pts.append((x, lo))
    return StrokePath(strokes=(np.array(pts),), letter=None)


def _arc(cx, cy, rx, ry, deg0, deg1, n=12):
    ang = np.radians(np.linspace(deg0, deg1, n + 1))
    return np.stack([cx + rx * np.cos(ang), cy + ry * np.sin(ang)], axis=1)


def _join(*parts) -> np.ndarray:
    rows = []
    for part in parts:
        arr = np.atleast_2d(np.asarray(part, dtype=np.float64))
        rows.append(arr)
    return np.concatenate(rows, axis=0)


def letter_paths() -> dict[str, StrokePath]:
    """Print-style lowercase a-z stroke fixtures, normalized to the unit box.

    These are handwriting-shaped fixtures, not claims about any user's
    writing. Multi-stroke letters (f, i, j, k, t, x, y) rely on the pen-up
    travel staying under the session hold time.
    """
    P = {}

    P["a"] = [_join(_arc(0.45, 0.35, 0.28, 0.28, 45, 405, 14), [(0.71, 0.50)], [(0.71, 0.07)])]
    P["b"] = [
        _join([(0.25, 0.95)], [(0.25, 0.07)], [(0.25, 0.43)], _arc(0.48, 0.28, 0.25, 0.23, 140, -140, 12))
    ]
    P["c"] = [_arc(0.50, 0.35, 0.30, 0.30, 60, 300, 12)]
    P["d"] = [
        _join(_arc(0.42, 0.32, 0.26, 0.26, 45, 405, 14), [(0.70, 0.95)], [(0.70, 0.07)])
    ]
    P["e"] = [_join([(0.22, 0.38)], [(0.69, 0.38)], _arc(0.455, 0.36, 0.24, 0.28, 5, 295, 12))]
    P["f"] = [
        _join([(0.68, 0.88)], [(0.58, 0.95)], [(0.45, 0.93)], [(0.38, 0.82)], [(0.38, 0.07)]),
        _join([(0.20, 0.55)], [(0.58, 0.55)]),
    ]
    P["g"] = [
        _join(
            _arc(0.45, 0.60, 0.24, 0.24, 45, 405, 14),
            [(0.69, 0.66)],
            [(0.69, 0.18)],
            [(0.60, 0.05)],
            [(0.42, 0.07)],
        )
    ]
    P["h"] = [
        _join([(0.25, 0.95)], [(0.25, 0.07)], [(0.25, 0.40)], _arc(0.45, 0.38, 0.20, 0.22, 180, 0, 8), [(0.65, 0.07)])
    ]
    P["i"] = [
        _join([(0.50, 0.82)], [(0.50, 0.07)]),
        _arc(0.50, 0.91, 0.045, 0.040, 90, 450, 8),
    ]
    P["j"] = [
        _join([(0.55, 0.82)], [(0.55, 0.20)], _arc(0.40, 0.20, 0.15, 0.15, 0, -120, 6)),
        _arc(0.55, 0.91, 0.045, 0.040, 90, 450, 8),
    ]
    P["k"] = [
        _join([(0.25, 0.95)], [(0.25, 0.07)]),
        _join([(0.62, 0.60)], [(0.27, 0.33)], [(0.65, 0.07)]),
    ]
    P["l"] = [_join([(0.45, 0.95)], [(0.45, 0.15)], _arc(0.57, 0.15, 0.12, 0.12, 180, 300, 6))]
    P["m"] = [
        _join(
            [(0.15, 0.60)],
            [(0.15, 0.07)],
            [(0.15, 0.42)],
            _arc(0.29, 0.42, 0.14, 0.18, 180, 0, 8),
            [(0.43, 0.07)],
            [(0.43, 0.42)],
            _arc(0.57, 0.42, 0.14, 0.18, 180, 0, 8),
            [(0.71, 0.07)],
        )
    ]
    P["n"] = [
        _join([(0.30, 0.60)], [(0.30, 0.07)], [(0.30, 0.40)], _arc(0.48, 0.40, 0.18, 0.20, 180, 0, 8), [(0.66, 0.07)])
    ]
    P["o"] = [_arc(0.50, 0.35, 0.27, 0.29, 90, 450, 14)]
    P["p"] = [
        _join([(0.28, 0.60)], [(0.28, 0.05)], [(0.28, 0.38)], _arc(0.48, 0.38, 0.22, 0.22, 160, -160, 10))
    ]
    P["q"] = [
        _join(_arc(0.45, 0.60, 0.24, 0.24, 45, 405, 14), [(0.69, 0.60)], [(0.69, 0.12)], [(0.78, 0.05)])
    ]
    P["r"] = [
        _join([(0.30, 0.60)], [(0.30, 0.07)], [(0.30, 0.42)], _arc(0.47, 0.40, 0.17, 0.18, 180, 30, 8))
    ]
    P["s"] = [
        np.array(
            [
                (0.68, 0.58),
                (0.55, 0.65),
                (0.38, 0.63),
                (0.30, 0.53),
                (0.38, 0.42),
                (0.55, 0.35),
                (0.64, 0.26),
                (0.57, 0.12),
                (0.40, 0.08),
                (0.27, 0.15),
            ]
        )
    ]
    P["t"] = [
        _join([(0.45, 0.90)], [(0.45, 0.15)], _arc(0.57, 0.15, 0.12, 0.10, 180, 280, 5)),
        _join([(0.25, 0.68)], [(0.68, 0.68)]),
    ]
    P["u"] = [
        _join([(0.28, 0.60)], [(0.28, 0.25)], _arc(0.46, 0.25, 0.18, 0.18, 180, 360, 8), [(0.64, 0.60)], [(0.64, 0.07)])
    ]
    P["v"] = [np.array([(0.25, 0.60), (0.50, 0.07), (0.75, 0.60)])]
    P["w"] = [np.array([(0.15, 0.60), (0.32, 0.07), (0.50, 0.45), (0.68, 0.07), (0.85, 0.60)])]
    P["x"] = [
        np.array([(0.25, 0.60), (0.70, 0.07)]),
        np.array([(0.70, 0.60), (0.25, 0.07)]),
    ]
    P["y"] = [
        np.array([(0.25, 0.60), (0.49, 0.28)]),
        np.array([(0.73, 0.60), (0.28, 0.02)]),
    ]
    P["z"] = [np.array([(0.25, 0.60), (0.72, 0.60), (0.25, 0.07), (0.72, 0.07)])]

    return {letter: StrokePath(strokes=tuple(strokes), letter=letter) for letter, strokes in P.items()}
