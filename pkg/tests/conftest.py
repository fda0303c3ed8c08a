from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from airwrite.classifier import TemplateSet
from airwrite.evaluate import ExperimentSpec, train_templates
from airwrite.synth import INCH, SynthSpec

# JIT compilation of the DTW kernel can land inside an arbitrary example,
# so wall-clock deadlines are meaningless here.
settings.register_profile(
    "airwrite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("airwrite")


@pytest.fixture(scope="session")
def warmed_dtw():
    """Force numba compilation once so timed tests measure the algorithm."""
    from airwrite.classifier import dtw_distance

    dtw_distance(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    return dtw_distance


@pytest.fixture(scope="session")
def five_letter_templates() -> TemplateSet:
    """Noise-free 12 inch templates for the five-letter benchmark set."""
    spec = ExperimentSpec(
        letters="abjwz",
        trials_per_letter=1,
        letter_size=12 * INCH,
        noise_sigma=0.0,
    )
    return train_templates(spec)


@pytest.fixture(scope="session")
def alphabet_templates() -> TemplateSet:
    """Noise-free 12 inch templates covering the full lowercase alphabet."""
    spec = ExperimentSpec(
        letters="abcdefghijklmnopqrstuvwxyz",
        trials_per_letter=1,
        letter_size=12 * INCH,
        noise_sigma=0.0,
    )
    return train_templates(spec)


@pytest.fixture(scope="session")
def synth_12in() -> SynthSpec:
    return SynthSpec(letter_size=12 * INCH, sample_rate=100, duration=1.5)


@pytest.fixture(scope="session")
def alphabet_template_file(alphabet_templates, tmp_path_factory) -> str:
    from airwrite.classifier import save_templates

    path = str(tmp_path_factory.mktemp("templates") / "alphabet.json")
    save_templates(path, alphabet_templates)
    return path
