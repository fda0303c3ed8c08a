"""One-shot template store and per-axis DTW letter classification.

Each letter is trained from a single recorded trace. A query trace is
compared against every template by running dynamic time warping on the x, y
and z axes independently and adding the three distances; the letter with the
minimum total is the prediction. DTW uses absolute-difference local cost, an
unconstrained warping window by default, boundary-matched endpoints, and no
path normalization, so small cases can be checked against path enumeration
by hand.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np
from numba import njit

from .errors import AlphabetError, EmptyInputError, NotTrainedError
from .orientation import RotatedSample

LOWERCASE_ALPHABET = tuple("abcdefghijklmnopqrstuvwxyz")
TEMPLATE_SCHEMA_VERSION = 1


@njit(cache=True)
def _dtw_core(a: np.ndarray, b: np.ndarray, radius: int) -> float:  # pragma: no cover
    n, m = a.shape[0], b.shape[0]
    prev = np.full(m + 1, np.inf)
    cur = np.full(m + 1, np.inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        cur[0] = np.inf
        lo, hi = 1, m
        if radius >= 0:
            lo = max(1, i - radius)
            hi = min(m, i + radius)
            for j in range(1, lo):
                cur[j] = np.inf
            for j in range(hi + 1, m + 1):
                cur[j] = np.inf
        for j in range(lo, hi + 1):
            cost = abs(a[i - 1] - b[j - 1])
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = cost + best
        prev, cur = cur, prev
    return prev[m]


def dtw_distance(
    a: Sequence[float], b: Sequence[float], band_fraction: Optional[float] = None
) -> float:
    """Accumulated |a_i - b_j| cost along the optimal monotone warping path.

    band_fraction, when set, restricts warping to a Sakoe-Chiba band of radius
    band_fraction * max(len(a), len(b)) (widened to keep the corner
    reachable). Left unset, warping is unconstrained.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise EmptyInputError("DTW needs non-empty sequences")
    radius = -1
    if band_fraction is not None:
        radius = max(
            int(math.ceil(band_fraction * max(a.size, b.size))),
            abs(int(a.size) - int(b.size)),
        )
    return float(_dtw_core(a, b, radius))


@dataclass(frozen=True)
class SessionTraceMatrix:
    """Rotated 3-axis acceleration of one session, the classifier's input unit."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(
                self, name, np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            )
        if not (self.x.shape == self.y.shape == self.z.shape) or self.x.ndim != 1:
            raise ValueError("axes must be three equal-length 1-D sequences")
        if self.x.shape[0] < 2:
            raise ValueError("a session trace needs at least 2 samples")
        for name in ("x", "y", "z"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite value on axis {name}")

    def __len__(self) -> int:
        return self.x.shape[0]

    @classmethod
    def from_rotated(
        cls, samples: Sequence[RotatedSample], label: Optional[str] = None
    ) -> "SessionTraceMatrix":
        return cls(
            x=np.array([s.accel.x for s in samples]),
            y=np.array([s.accel.y for s in samples]),
            z=np.array([s.accel.z for s in samples]),
            label=label,
        )


def total_distance(
    a: SessionTraceMatrix, b: SessionTraceMatrix, band_fraction: Optional[float] = None
) -> float:
    """Sum of the three independently warped per-axis DTW distances."""
    return (
        dtw_distance(a.x, b.x, band_fraction)
        + dtw_distance(a.y, b.y, band_fraction)
        + dtw_distance(a.z, b.z, band_fraction)
    )


@dataclass(frozen=True)
class LetterTemplate:
    letter: str
    trace: SessionTraceMatrix


@dataclass(frozen=True)
class Prediction:
    letter: str
    ranked: tuple[tuple[str, float], ...]  # (label, total distance), ascending


@dataclass(frozen=True)
class TemplateSet:
    """Immutable one-template-per-letter store; `train` returns a new set."""

    alphabet: tuple[str, ...] = LOWERCASE_ALPHABET
    templates: Mapping[str, SessionTraceMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AlphabetError("alphabet contains duplicate labels")
        unknown = set(self.templates) - set(self.alphabet)
        if unknown:
            raise AlphabetError(f"templates outside the alphabet: {sorted(unknown)}")

    def missing(self) -> list[str]:
        return [letter for letter in self.alphabet if letter not in self.templates]

    @property
    def complete(self) -> bool:
        return not self.missing()

    def __len__(self) -> int:
        return len(self.templates)


def train(store: TemplateSet, letter: str, trace: SessionTraceMatrix) -> TemplateSet:
    """Insert or replace the single template for `letter` (copy-on-write)."""
    if letter not in store.alphabet:
        raise AlphabetError(f"letter {letter!r} not in alphabet {''.join(store.alphabet)!r}")
    templates = dict(store.templates)
    templates[letter] = trace
    return TemplateSet(store.alphabet, templates)


def classify(
    store: TemplateSet,
    trace: SessionTraceMatrix,
    band_fraction: Optional[float] = None,
) -> Prediction:
    """Rank every template by total distance; nearest wins, ties break by alphabet order."""
    if not store.complete:
        raise NotTrainedError(store.missing())
    order = {letter: i for i, letter in enumerate(store.alphabet)}
    distances = [
        (letter, total_distance(trace, store.templates[letter], band_fraction))
        for letter in store.alphabet
    ]
    distances.sort(key=lambda pair: (pair[1], order[pair[0]]))
    return Prediction(letter=distances[0][0], ranked=tuple(distances))


def templates_to_json(store: TemplateSet) -> str:
    doc = {
        "schema": TEMPLATE_SCHEMA_VERSION,
        "alphabet": list(store.alphabet),
        "templates": {
            letter: {
                "x": trace.x.tolist(),
                "y": trace.y.tolist(),
                "z": trace.z.tolist(),
            }
            for letter, trace in sorted(store.templates.items())
        },
    }
    return json.dumps(doc, sort_keys=True)


def templates_from_json(text: str) -> TemplateSet:
    doc = json.loads(text)
    if doc.get("schema") != TEMPLATE_SCHEMA_VERSION:
        raise ValueError(f"unsupported template schema: {doc.get('schema')!r}")
    templates = {
        letter: SessionTraceMatrix(
            x=np.array(axes["x"]), y=np.array(axes["y"]), z=np.array(axes["z"]), label=letter
        )
        for letter, axes in doc["templates"].items()
    }
    return TemplateSet(tuple(doc["alphabet"]), templates)


def save_templates(path: str, store: TemplateSet) -> None:
    """Write the template JSON atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(templates_to_json(store))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_templates(path: str) -> TemplateSet:
    with open(path) as handle:
        return templates_from_json(handle.read())
