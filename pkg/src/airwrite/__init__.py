"""Air-writing recognition: smoothing, arm-angle rotation, session gating,
and one-shot per-axis DTW letter classification, with a synthetic trace
generator standing in for watch hardware."""

from .classifier import (
    LOWERCASE_ALPHABET,
    Prediction,
    SessionTraceMatrix,
    TemplateSet,
    classify,
    dtw_distance,
    load_templates,
    save_templates,
    total_distance,
    train,
)
from .errors import AirwriteError
from .evaluate import ConfusionMatrix, ExperimentSpec, accuracy, report, run_experiment
from .orientation import arm_angle, normalize_gravity, rotate_frame
from .pipeline import PipelineConfig, SessionResult, StreamingPipeline, run_pipeline
from .sensor_model import STANDARD_GRAVITY, FilterSpec, SensorSample, Vec3, smooth
from .session import SessionDetector, TransferLedger, savings_percent, segment
from .synth import StrokePath, SynthSpec, letter_paths, synthesize, synthesize_word

__all__ = [
    "AirwriteError",
    "ConfusionMatrix",
    "ExperimentSpec",
    "FilterSpec",
    "LOWERCASE_ALPHABET",
    "PipelineConfig",
    "Prediction",
    "STANDARD_GRAVITY",
    "SensorSample",
    "SessionDetector",
    "SessionResult",
    "SessionTraceMatrix",
    "StreamingPipeline",
    "StrokePath",
    "SynthSpec",
    "TemplateSet",
    "TransferLedger",
    "Vec3",
    "accuracy",
    "arm_angle",
    "classify",
    "dtw_distance",
    "letter_paths",
    "load_templates",
    "normalize_gravity",
    "report",
    "rotate_frame",
    "run_experiment",
    "run_pipeline",
    "save_templates",
    "savings_percent",
    "segment",
    "smooth",
    "synthesize",
    "synthesize_word",
    "total_distance",
    "train",
]

__version__ = "0.1.0"
