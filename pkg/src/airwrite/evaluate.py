"""Confusion-matrix experiments over synthetic letter traces.

An experiment trains one template per letter from a seeded synthetic trace,
then classifies independently seeded test traces and accumulates an
actual-by-predicted count grid. Template and test seeds must differ so the
test traces are never the training traces.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np

from .classifier import TemplateSet, classify, train
from .errors import AlphabetError, IncompleteExperimentError
from .pipeline import PipelineConfig, single_session_matrix
from .synth import SynthSpec, letter_paths, synthesize

# Noise level used by the reported experiments. Chosen so the non-similar
# letter set stays diagonal-dominant at the 12-inch box while the 6-inch box
# visibly degrades; see README for the sweep that picked it.
DEFAULT_NOISE_SIGMA = 0.2


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count grid: rows are actual labels, columns predicted."""

    alphabet: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        n = len(self.alphabet)
        if counts.shape != (n, n):
            raise AlphabetError(f"counts must be {n}x{n}, got {counts.shape}")
        if (counts < 0).any():
            raise AlphabetError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    def row(self, letter: str) -> np.ndarray:
        return self.counts[self.alphabet.index(letter)]


def accuracy(matrix: ConfusionMatrix) -> tuple[dict[str, float], float]:
    """Per-letter diagonal fractions and their unweighted mean."""
    row_sums = matrix.counts.sum(axis=1)
    if (row_sums == 0).any():
        empty = [letter for letter, s in zip(matrix.alphabet, row_sums) if s == 0]
        raise IncompleteExperimentError(f"no trials recorded for: {', '.join(empty)}")
    diag = np.diag(matrix.counts)
    per_letter = {
        letter: float(d) / float(s)
        for letter, d, s in zip(matrix.alphabet, diag, row_sums)
    }
    mean = float(np.mean(list(per_letter.values())))
    return per_letter, mean


def diagonal_dominant(matrix: ConfusionMatrix) -> bool:
    """True when every diagonal entry is the strict row maximum or ties it."""
    counts = matrix.counts
    for i in range(len(matrix.alphabet)):
        if counts[i, i] < counts[i].max():
            return False
    return True


@dataclass(frozen=True)
class ExperimentSpec:
    letters: tuple[str, ...]
    trials_per_letter: int = 100
    letter_size: float = 12 * 0.0254
    sample_rate: float = 100.0
    duration: float = 1.5
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    template_seed: int = 1
    test_seed: int = 2
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self) -> None:
        if self.trials_per_letter < 1:
            raise IncompleteExperimentError("trials_per_letter must be >= 1")
        if self.template_seed == self.test_seed:
            raise IncompleteExperimentError(
                "template_seed and test_seed must differ: templates may not be "
                "the test traces"
            )
        library = letter_paths()
        unknown = [c for c in self.letters if c not in library]
        if unknown:
            raise AlphabetError(f"letters outside the path library: {unknown}")

    def synth_spec(self, seed: int) -> SynthSpec:
        return SynthSpec(
            letter_size=self.letter_size,
            sample_rate=self.sample_rate,
            duration=self.duration,
            noise_sigma=self.noise_sigma,
            rng_seed=seed,
        )


def _derived_seed(*path: int) -> int:
    return int(np.random.SeedSequence(list(path)).generate_state(1)[0])


def train_templates(spec: ExperimentSpec) -> TemplateSet:
    paths = letter_paths()
    templates = TemplateSet(alphabet=tuple(spec.letters))
    for idx, letter in enumerate(spec.letters):
        seed = _derived_seed(spec.template_seed, idx)
        trace = synthesize(paths[letter], spec.synth_spec(seed))
        matrix = single_session_matrix(trace, spec.pipeline, label=letter)
        templates = train(templates, letter, matrix)
    return templates


def run_experiment(spec: ExperimentSpec) -> ConfusionMatrix:
    """Train one template per letter, classify seeded trials, count outcomes."""
    paths = letter_paths()
    templates = train_templates(spec)
    n = len(spec.letters)
    counts = np.zeros((n, n), dtype=np.int64)
    column = {letter: j for j, letter in enumerate(spec.letters)}
    for i, letter in enumerate(spec.letters):
        for trial in range(spec.trials_per_letter):
            seed = _derived_seed(spec.test_seed, i, trial)
            trace = synthesize(paths[letter], spec.synth_spec(seed))
            matrix = single_session_matrix(trace, spec.pipeline)
            prediction = classify(templates, matrix, spec.pipeline.band_fraction)
            counts[i, column[prediction.letter]] += 1
    return ConfusionMatrix(alphabet=tuple(spec.letters), counts=counts)


def _percentages(matrix: ConfusionMatrix) -> np.ndarray:
    row_sums = matrix.counts.sum(axis=1, keepdims=True)
    safe = np.where(row_sums == 0, 1, row_sums)
    return 100.0 * matrix.counts / safe


def report(matrix: ConfusionMatrix, format: str = "csv") -> str:
    """Render the matrix as percentages with one decimal plus a mean footer."""
    if format not in ("csv", "markdown"):
        raise ValueError(f"unknown report format: {format!r}")
    if not matrix.alphabet:
        return ""
    pct = _percentages(matrix)
    _, mean = accuracy(matrix)
    out = io.StringIO()
    if format == "csv":
        out.write("actual," + ",".join(matrix.alphabet) + "\n")
        for i, letter in enumerate(matrix.alphabet):
            cells = ",".join(f"{p:.1f}%" for p in pct[i])
            out.write(f"{letter},{cells}\n")
        out.write(f"mean,{100.0 * mean:.1f}%\n")
    else:
        header = "| actual | " + " | ".join(matrix.alphabet) + " |"
        rule = "| --- |" + " --- |" * len(matrix.alphabet)
        out.write(header + "\n" + rule + "\n")
        for i, letter in enumerate(matrix.alphabet):
            cells = " | ".join(f"{p:.1f}%" for p in pct[i])
            out.write(f"| {letter} | {cells} |\n")
        out.write(f"\nMean accuracy: {100.0 * mean:.1f}%\n")
    return out.getvalue()


def parse_csv_report(text: str) -> tuple[tuple[str, ...], np.ndarray, float]:
    """Inverse of report(format="csv"): labels, percentage grid, mean."""
    lines = [line for line in text.splitlines() if line]
    alphabet = tuple(lines[0].split(",")[1:])
    rows = []
    for line in lines[1:-1]:
        cells = line.split(",")[1:]
        rows.append([float(c.rstrip("%")) for c in cells])
    mean = float(lines[-1].split(",")[1].rstrip("%")) / 100.0
    return alphabet, np.asarray(rows), mean


def paired_size_comparison(
    spec: ExperimentSpec, small_size: float
) -> tuple[ConfusionMatrix, ConfusionMatrix]:
    """Run the same seeded experiment at two letter sizes (large, small)."""
    big = run_experiment(spec)
    small = run_experiment(replace(spec, letter_size=small_size))
    return big, small
