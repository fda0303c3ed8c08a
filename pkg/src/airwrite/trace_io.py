"""JSONL trace files: one sample per line.

Raw sample: {"t_us": <int>, "la": [x, y, z], "g": [x, y, z]}
Rotated sample: same shape with "g" omitted.

Readers reject non-monotonic timestamps and non-finite components, citing the
offending line number.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable, Iterator, Sequence

from .errors import TraceFormatError
from .orientation import RotatedSample
from .sensor_model import SensorSample, Vec3


def _parse_triple(value, name: str, line: int) -> tuple[float, float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise TraceFormatError(f'"{name}" must be a list of 3 numbers', line)
    out = []
    for component in value:
        if not isinstance(component, (int, float)) or isinstance(component, bool):
            raise TraceFormatError(f'"{name}" has a non-numeric component', line)
        if not math.isfinite(component):
            raise TraceFormatError(f'"{name}" has a non-finite component', line)
        out.append(float(component))
    return out[0], out[1], out[2]


def parse_sample_line(text: str, line: int) -> SensorSample:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON ({exc.msg})", line) from exc
    if not isinstance(record, dict):
        raise TraceFormatError("each line must be a JSON object", line)
    if "t_us" not in record or "la" not in record or "g" not in record:
        raise TraceFormatError('missing required keys "t_us", "la", "g"', line)
    t_us = record["t_us"]
    if not isinstance(t_us, int) or isinstance(t_us, bool):
        raise TraceFormatError('"t_us" must be an integer', line)
    la = Vec3(*_parse_triple(record["la"], "la", line))
    g = Vec3(*_parse_triple(record["g"], "g", line))
    return SensorSample(t_us, la, g)


def read_samples(lines: Iterable[str]) -> Iterator[SensorSample]:
    last_t = None
    for line_no, text in enumerate(lines, start=1):
        text = text.strip()
        if not text:
            continue
        sample = parse_sample_line(text, line_no)
        if last_t is not None and sample.t_us <= last_t:
            raise TraceFormatError(
                f'"t_us" must be strictly increasing ({last_t} then {sample.t_us})', line_no
            )
        last_t = sample.t_us
        yield sample


def read_trace(path: str) -> list[SensorSample]:
    with open(path) as handle:
        return list(read_samples(handle))


def sample_to_json(sample: SensorSample) -> str:
    return json.dumps(
        {
            "t_us": sample.t_us,
            "la": [sample.linear_accel.x, sample.linear_accel.y, sample.linear_accel.z],
            "g": [sample.gravity.x, sample.gravity.y, sample.gravity.z],
        }
    )


def rotated_to_json(sample: RotatedSample) -> str:
    return json.dumps(
        {"t_us": sample.t_us, "la": [sample.accel.x, sample.accel.y, sample.accel.z]}
    )


def write_trace(samples: Sequence[SensorSample], out: IO[str]) -> None:
    for sample in samples:
        out.write(sample_to_json(sample))
        out.write("\n")


def write_trace_file(samples: Sequence[SensorSample], path: str) -> None:
    with open(path, "w") as handle:
        write_trace(samples, handle)
