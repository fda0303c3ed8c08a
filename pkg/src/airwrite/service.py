"""Real-time recognition service over a websocket.

Protocol (one JSON object per frame, schema field "v": 1):

  client -> server kinds:
    stroke_point   {"x", "y", "t_ms"} normalized pad coordinates; {"up": true}
                   marks the pen lift that completes the current stroke
    raw_sample     {"t_us", "la": [x,y,z], "g": [x,y,z]} direct sensor input
    begin_template {"letter"} arm template recording for the next session
    set_config     {"letter_box_in"} virtual pad size in inches

  server -> client kinds:
    session_start, session_end, prediction (full ranked distance list),
    template_saved, error

Strokes are converted server-side into the same kinematics the synthesizer
uses: positions in a virtual letter box, second-difference acceleration at the
pad's own timestamp spacing, smoothstep travel filling pen-up gaps. The pad
plane is upright, so gravity is pinned straight down and the arm angle is
zero. A connection speaks either strokes or raw samples, never both.

Protocol violations (bad JSON, unknown kinds, non-monotone timestamps,
out-of-range coordinates) answer with an error message and close the
connection. Classifying before every letter is trained answers with a
"not_trained" error and keeps the connection open.
"""

import json
import math
import threading
from typing import Callable, Optional

import numpy as np

from .classifier import (
    SessionTraceMatrix,
    TemplateSet,
    classify,
    save_templates,
    train,
)
from .errors import AirwriteError
from .pipeline import PipelineConfig, StreamingPipeline
from .sensor_model import STANDARD_GRAVITY, SensorSample, Vec3
from .synth import INCH

PROTOCOL_VERSION = 1
DEFAULT_LETTER_BOX_IN = 12.0
QUIET_STEP_US = 10_000  # spacing of synthetic quiet samples
MAX_PENDING_MESSAGES = 4096  # queue depth before the rate guard closes


class ProtocolError(Exception):
    """Client message violates the schema; the connection must close."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _smoothstep(u: np.ndarray) -> np.ndarray:
    return u * u * (3.0 - 2.0 * u)


def second_difference_nonuniform(values: np.ndarray, t_s: np.ndarray) -> np.ndarray:
    """Second derivative on a non-uniform grid, zero-velocity end padding."""
    dt = float(np.median(np.diff(t_s))) if len(t_s) > 1 else 0.01
    v = np.concatenate(([values[0]], values, [values[-1]]))
    t = np.concatenate(([t_s[0] - dt], t_s, [t_s[-1] + dt]))
    out = np.empty(len(values))
    for i in range(1, len(t) - 1):
        dt0 = t[i] - t[i - 1]
        dt1 = t[i + 1] - t[i]
        out[i - 1] = 2.0 * (
            (v[i + 1] - v[i]) / dt1 - (v[i] - v[i - 1]) / dt0
        ) / (dt0 + dt1)
    return out


class TemplateStore:
    """Shared template set with atomic replacement and optional file backing."""

    def __init__(self, store: Optional[TemplateSet] = None, path: Optional[str] = None):
        self._store = store if store is not None else TemplateSet()
        self._path = path
        self._lock = threading.Lock()

    def get(self) -> TemplateSet:
        return self._store

    def commit(self, letter: str, matrix: SessionTraceMatrix) -> TemplateSet:
        with self._lock:
            updated = train(self._store, letter, matrix)
            if self._path:
                save_templates(self._path, updated)
            self._store = updated
            return updated


class Connection:
    """Per-connection protocol state; synchronous so tests can drive it directly."""

    def __init__(self, config: PipelineConfig, store: TemplateStore):
        self.config = config
        self.store = store
        self.pipeline = StreamingPipeline(config)
        self.letter_box = DEFAULT_LETTER_BOX_IN * INCH
        self.close_code: Optional[str] = None
        self._armed_letter: Optional[str] = None
        self._input_kind: Optional[str] = None  # "stroke_point" or "raw_sample"
        self._stroke: list[tuple[float, float, float]] = []  # (x, y, t_ms)
        self._last_client_ms: Optional[float] = None
        self._pen_position: Optional[tuple[float, float]] = None  # meters
        self._v_us = 0  # virtual sample clock
        self._session_open = False
        self._quiet_streak_us = 0

    # -- message handling ---------------------------------------------------

    def handle_text(self, text: str) -> list[dict]:
        try:
            return self._dispatch(text)
        except ProtocolError as exc:
            self.close_code = exc.code
            return [_error(exc.code, str(exc))]

    def _dispatch(self, text: str) -> list[dict]:
        try:
            msg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProtocolError("bad_json", f"unparseable message: {exc.msg}")
        if not isinstance(msg, dict) or msg.get("v") != PROTOCOL_VERSION:
            raise ProtocolError("bad_version", 'messages must carry "v": 1')
        kind = msg.get("kind")
        if kind == "stroke_point":
            return self._on_stroke_point(msg)
        if kind == "raw_sample":
            return self._on_raw_sample(msg)
        if kind == "begin_template":
            return self._on_begin_template(msg)
        if kind == "set_config":
            return self._on_set_config(msg)
        raise ProtocolError("bad_kind", f"unknown message kind {kind!r}")

    def _require_input_kind(self, kind: str) -> None:
        if self._input_kind is None:
            self._input_kind = kind
        elif self._input_kind != kind:
            raise ProtocolError(
                "mixed_input", "a connection speaks either strokes or raw samples"
            )

    def _on_stroke_point(self, msg: dict) -> list[dict]:
        self._require_input_kind("stroke_point")
        t_ms = _number(msg, "t_ms")
        if self._last_client_ms is not None and t_ms <= self._last_client_ms:
            raise ProtocolError("bad_time", "stroke timestamps must be strictly increasing")
        self._last_client_ms = t_ms
        if msg.get("up"):
            return self._finish_stroke()
        x = _number(msg, "x")
        y = _number(msg, "y")
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ProtocolError("bad_coords", "pad coordinates must lie in [0, 1]")
        self._stroke.append((x, y, t_ms))
        return []

    def _on_raw_sample(self, msg: dict) -> list[dict]:
        self._require_input_kind("raw_sample")
        t_us = msg.get("t_us")
        la = msg.get("la")
        g = msg.get("g")
        if not isinstance(t_us, int) or not _triple(la) or not _triple(g):
            raise ProtocolError("bad_sample", 'raw_sample needs int "t_us" and 3-vectors "la", "g"')
        if t_us <= self._v_us and self._v_us > 0:
            raise ProtocolError("bad_time", "sample timestamps must be strictly increasing")
        sample = SensorSample(t_us, Vec3(*la), Vec3(*g))
        self._v_us = t_us
        return self._feed(sample)

    def _on_begin_template(self, msg: dict) -> list[dict]:
        letter = msg.get("letter")
        alphabet = self.store.get().alphabet
        if not isinstance(letter, str) or letter not in alphabet:
            raise ProtocolError("bad_letter", f"letter must be one of {''.join(alphabet)}")
        self._armed_letter = letter
        return []

    def _on_set_config(self, msg: dict) -> list[dict]:
        box = msg.get("letter_box_in")
        extra = set(msg) - {"v", "kind", "letter_box_in"}
        if extra:
            raise ProtocolError("bad_config", f"unknown config keys: {sorted(extra)}")
        if not isinstance(box, (int, float)) or isinstance(box, bool) or not 0 < box <= 120:
            raise ProtocolError("bad_config", "letter_box_in must be a positive number")
        self.letter_box = float(box) * INCH
        return []

    # -- stroke conversion --------------------------------------------------

    def _pad_to_meters(self, x: float, y: float) -> tuple[float, float]:
        # Pad y grows downward; world vertical grows upward.
        return (x - 0.5) * self.letter_box, (0.5 - y) * self.letter_box

    def _finish_stroke(self) -> list[dict]:
        points = self._stroke
        self._stroke = []
        if len(points) < 2:
            return []  # a tap carries no motion
        horiz = np.empty(len(points))
        vert = np.empty(len(points))
        for i, (x, y, _) in enumerate(points):
            horiz[i], vert[i] = self._pad_to_meters(x, y)
        t_s = np.array([p[2] for p in points]) / 1e3
        step_us = max(int(np.median(np.diff(t_s)) * 1e6), 1_000)

        out: list[dict] = []
        if self._pen_position is not None:
            out.extend(self._feed_travel(self._pen_position, (horiz[0], vert[0]), step_us))
        a_h = second_difference_nonuniform(horiz, t_s)
        a_v = second_difference_nonuniform(vert, t_s)
        rel_us = ((t_s - t_s[0]) * 1e6).astype(np.int64)
        base = self._v_us + step_us
        for i in range(len(points)):
            out.extend(self._feed(self._pad_sample(base + int(rel_us[i]), a_v[i], a_h[i])))
        self._pen_position = (float(horiz[-1]), float(vert[-1]))
        return out

    def _feed_travel(
        self, start: tuple[float, float], end: tuple[float, float], step_us: int
    ) -> list[dict]:
        """Smoothstep hop between strokes, mirroring the synthesizer's pen-up travel."""
        gap_us = min(max(step_us * 4, 100_000), 150_000)
        n = max(int(gap_us // step_us), 4)
        u = _smoothstep(np.linspace(0.0, 1.0, n))
        horiz = start[0] + (end[0] - start[0]) * u
        vert = start[1] + (end[1] - start[1]) * u
        t_s = np.arange(n) * (step_us / 1e6)
        a_h = second_difference_nonuniform(horiz, t_s)
        a_v = second_difference_nonuniform(vert, t_s)
        out: list[dict] = []
        base = self._v_us + step_us
        for i in range(n):
            out.extend(self._feed(self._pad_sample(base + i * step_us, a_v[i], a_h[i])))
        return out

    def _pad_sample(self, t_us: int, a_v: float, a_h: float) -> SensorSample:
        # Upright pad: arm angle zero, gravity straight down, left/right on z.
        return SensorSample(
            t_us,
            Vec3(0.0, a_v, a_h),
            Vec3(0.0, -STANDARD_GRAVITY, 0.0),
        )

    # -- pipeline plumbing --------------------------------------------------

    def _feed(self, sample: SensorSample) -> list[dict]:
        self._v_us = sample.t_us
        norm = sample.linear_accel.norm()
        if norm > self.config.threshold:
            self._quiet_streak_us = 0
        out: list[dict] = []
        for event in self.pipeline.feed(sample):
            if event[0] == "start":
                self._session_open = True
                out.append({"v": 1, "kind": "session_start", "t_us": event[1]})
            else:
                self._session_open = False
                _, t_us, matrix = event
                samples = len(matrix) if matrix is not None else 1
                out.append(
                    {"v": 1, "kind": "session_end", "t_us": t_us, "samples": samples}
                )
                out.append(self._close_session(matrix))
        return out

    def _close_session(self, matrix: Optional[SessionTraceMatrix]) -> dict:
        if matrix is None:
            return _error("short_session", "session was a single isolated spike")
        if self._armed_letter is not None:
            letter, self._armed_letter = self._armed_letter, None
            updated = self.store.commit(letter, matrix)
            return {
                "v": 1,
                "kind": "template_saved",
                "letter": letter,
                "trained": len(updated),
                "missing": updated.missing(),
            }
        store = self.store.get()
        if not store.complete:
            return _error(
                "not_trained",
                "cannot classify before every letter is trained",
                missing=store.missing(),
            )
        prediction = classify(store, matrix, self.config.band_fraction)
        return {
            "v": 1,
            "kind": "prediction",
            "letter": prediction.letter,
            "ranked": [[letter, dist] for letter, dist in prediction.ranked],
        }

    # -- idle handling ------------------------------------------------------

    @property
    def idle_wait_s(self) -> float:
        return (self.config.hold_ms + 100.0) / 1e3

    def needs_idle_quiet(self) -> bool:
        """True while silence still carries information for the detector."""
        if self._input_kind != "stroke_point" or self._v_us == 0:
            return False
        return self._session_open or self._quiet_streak_us <= 2_000_000

    def idle_tick(self, span_us: Optional[int] = None) -> list[dict]:
        """Feed synthetic quiet covering an idle wall-clock span."""
        if not self.needs_idle_quiet():
            return []
        span = span_us if span_us is not None else int(self.idle_wait_s * 1e6)
        out: list[dict] = []
        for _ in range(max(span // QUIET_STEP_US, 1)):
            self._quiet_streak_us += QUIET_STEP_US
            out.extend(self._feed(self._pad_sample(self._v_us + QUIET_STEP_US, 0.0, 0.0)))
        return out


def _error(code: str, message: str, **extra) -> dict:
    return {"v": 1, "kind": "error", "code": code, "message": message, **extra}


def _number(msg: dict, key: str) -> float:
    value = msg.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise ProtocolError("bad_field", f'"{key}" must be a finite number')
    return float(value)


def _triple(value) -> bool:
    return (
        isinstance(value, (list, tuple))
        and len(value) == 3
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
        and all(math.isfinite(c) for c in value)
    )


def create_app(
    templates: Optional[TemplateSet] = None,
    template_path: Optional[str] = None,
    config: Optional[PipelineConfig] = None,
):
    """Build the FastAPI app hosting /v1/stream and /v1/health."""
    import asyncio

    from fastapi import FastAPI, WebSocket, WebSocketDisconnect

    app = FastAPI()
    store = TemplateStore(templates, template_path)
    pipeline_config = config if config is not None else PipelineConfig()
    app.state.store = store
    app.state.config = pipeline_config

    @app.get("/v1/health")
    def health() -> dict:
        current = store.get()
        return {
            "v": 1,
            "status": "ok",
            "trained": len(current),
            "missing": current.missing(),
            "complete": current.complete,
        }

    async def _pump(ws: WebSocket, queue: asyncio.Queue) -> None:
        try:
            while True:
                await queue.put(await ws.receive_text())
        except WebSocketDisconnect:
            await queue.put(None)

    @app.websocket("/v1/stream")
    async def stream(ws: WebSocket) -> None:
        await ws.accept()
        conn = Connection(pipeline_config, store)
        queue: asyncio.Queue = asyncio.Queue()
        pump = asyncio.create_task(_pump(ws, queue))
        try:
            while True:
                try:
                    item = await asyncio.wait_for(queue.get(), timeout=conn.idle_wait_s)
                except asyncio.TimeoutError:
                    for msg in conn.idle_tick():
                        await ws.send_text(json.dumps(msg))
                    continue
                if item is None:
                    return  # client went away
                if queue.qsize() > MAX_PENDING_MESSAGES:
                    await ws.send_text(
                        json.dumps(_error("rate", "client outran processing; closing"))
                    )
                    await ws.close(code=1013)
                    return
                try:
                    replies = conn.handle_text(item)
                except AirwriteError as exc:
                    await ws.send_text(json.dumps(_error("data", str(exc))))
                    await ws.close(code=1008)
                    return
                for msg in replies:
                    await ws.send_text(json.dumps(msg))
                if conn.close_code is not None:
                    await ws.close(code=1008)
                    return
        except WebSocketDisconnect:
            pass
        finally:
            pump.cancel()

    return app
