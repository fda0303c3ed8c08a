"""Command-line entry point: synth, pipeline, train, classify, eval, serve.

Exit codes: 0 success, 2 usage/config error, 3 data error. Where a path flag
is omitted, traces flow over stdin/stdout as JSONL so commands compose in a
shell. A TOML config file may set any pipeline option; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .classifier import TemplateSet, load_templates, save_templates, train
from .errors import AirwriteError, ConfigError
from .evaluate import DEFAULT_NOISE_SIGMA, ExperimentSpec, accuracy, report, run_experiment
from .pipeline import PipelineConfig, run_pipeline, single_session_matrix
from .session import TransferLedger
from .synth import INCH, SynthSpec, letter_paths, synthesize, synthesize_word
from .trace_io import read_samples, sample_to_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _load_toml(path: str) -> dict:
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as handle:
        return tomllib.load(handle)


_PIPELINE_FLAGS = {
    "threshold": "threshold",
    "hold_ms": "hold_ms",
    "smooth_channel": "smooth_channel",
    "angle_mode": "angle_mode",
    "band_fraction": "band_fraction",
    "filter_weights": "filter_weights",
}


def build_pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge TOML config (if any) with CLI flags; flags win."""
    raw: dict = {}
    if getattr(args, "config", None):
        raw.update(_load_toml(args.config))
    for key, attr in _PIPELINE_FLAGS.items():
        value = getattr(args, attr, None)
        if value is not None:
            raw[key] = value
    if isinstance(raw.get("filter_weights"), str):
        raw["filter_weights"] = tuple(
            float(w) for w in raw["filter_weights"].split(",") if w.strip()
        )
    return PipelineConfig.from_dict(raw)


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML file with pipeline options")
    parser.add_argument("--threshold", type=float, help="session start threshold, m/s^2")
    parser.add_argument("--hold-ms", dest="hold_ms", type=float, help="quiet cutoff, ms")
    parser.add_argument(
        "--smooth-channel",
        dest="smooth_channel",
        choices=["linear_accel", "gravity", "both"],
    )
    parser.add_argument("--angle-mode", dest="angle_mode", choices=["per_sample", "frozen"])
    parser.add_argument(
        "--band-fraction",
        dest="band_fraction",
        type=float,
        help="warping band as a fraction of the longer sequence (default: unconstrained)",
    )
    parser.add_argument(
        "--filter-weights",
        dest="filter_weights",
        help="comma-separated smoothing weights, oldest first (default 1,2,3,4,5)",
    )


def _read_trace(path: Optional[str]):
    if path:
        with open(path) as handle:
            return list(read_samples(handle))
    return list(read_samples(sys.stdin))


def _out_handle(path: Optional[str]):
    return open(path, "w") if path else sys.stdout


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        letter_size=args.size_in * INCH,
        sample_rate=args.rate,
        duration=args.duration,
        noise_sigma=args.noise,
        arm_theta=math.radians(args.theta_deg),
        rng_seed=args.seed,
        quiet_ms=args.quiet_ms,
    )
    if args.word is not None:
        samples = synthesize_word(args.word, spec, gap_ms=args.gap_ms)
    else:
        paths = letter_paths()
        if args.letter not in paths:
            raise ConfigError(f"no stroke path for letter {args.letter!r}")
        samples = synthesize(paths[args.letter], spec)
    out = _out_handle(args.out)
    try:
        for sample in samples:
            out.write(sample_to_json(sample) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _session_record(result, include_trace: bool) -> dict:
    record = {
        "v": 1,
        "kind": "session",
        "index": result.index,
        "t_start_us": result.t_start_us,
        "t_end_us": result.t_end_us,
        "samples": len(result.matrix),
    }
    if include_trace:
        record["trace"] = {
            "x": result.matrix.x.tolist(),
            "y": result.matrix.y.tolist(),
            "z": result.matrix.z.tolist(),
        }
    if result.prediction is not None:
        record["prediction"] = {
            "letter": result.prediction.letter,
            "ranked": [[letter, dist] for letter, dist in result.prediction.ranked],
        }
    return record


def cmd_pipeline(args: argparse.Namespace) -> int:
    stream = _read_trace(args.trace)
    config = build_pipeline_config(args)
    templates = load_templates(args.templates) if args.templates else None
    results = run_pipeline(stream, config, templates)
    out = _out_handle(args.out)
    try:
        for result in results:
            out.write(json.dumps(_session_record(result, not args.no_trace)) + "\n")
        if args.report_savings:
            gated = sum(len(r.matrix) for r in results)
            ledger = TransferLedger(continuous_count=len(stream), gated_count=gated)
            out.write(
                json.dumps(
                    {
                        "v": 1,
                        "kind": "savings",
                        "continuous_count": ledger.continuous_count,
                        "gated_count": ledger.gated_count,
                        "savings_percent": round(ledger.savings(), 1),
                    }
                )
                + "\n"
            )
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    stream = _read_trace(args.trace)
    config = build_pipeline_config(args)
    matrix = single_session_matrix(stream, config, label=args.letter)
    try:
        store = load_templates(args.templates)
    except FileNotFoundError:
        store = TemplateSet()
    store = train(store, args.letter, matrix)
    save_templates(args.templates, store)
    missing = store.missing()
    status = "complete" if not missing else f"{len(store)}/{len(store.alphabet)} trained"
    print(f"trained {args.letter!r}: {status}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    from .classifier import classify

    stream = _read_trace(args.trace)
    config = build_pipeline_config(args)
    store = load_templates(args.templates)
    matrix = single_session_matrix(stream, config)
    prediction = classify(store, matrix, config.band_fraction)
    print(
        json.dumps(
            {
                "letter": prediction.letter,
                "ranked": [[letter, dist] for letter, dist in prediction.ranked],
            }
        )
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    letters = tuple(args.letters.replace(",", ""))
    base = np.random.SeedSequence(args.seed)
    template_seed, test_seed = (int(s) for s in base.generate_state(2))
    spec = ExperimentSpec(
        letters=letters,
        trials_per_letter=args.trials,
        letter_size=args.size_in * INCH,
        noise_sigma=args.noise,
        template_seed=args.template_seed if args.template_seed is not None else template_seed,
        test_seed=args.test_seed if args.test_seed is not None else test_seed,
        pipeline=build_pipeline_config(args),
    )
    matrix = run_experiment(spec)
    sys.stdout.write(report(matrix, args.format))
    _, mean = accuracy(matrix)
    print(f"mean accuracy: {100.0 * mean:.1f}%", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    templates = load_templates(args.templates) if args.templates else None
    app = create_app(
        templates=templates,
        template_path=args.templates,
        config=build_pipeline_config(args),
    )
    uvicorn.run(app, host=args.addr, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="airwrite",
        description="Air-writing recognition: synthesis, segmentation, DTW classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic sensor trace")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--letter", help="single lowercase letter")
    group.add_argument("--word", help="word; letters separated by quiet gaps")
    p.add_argument("--size-in", dest="size_in", type=float, default=12.0, help="letter box, inches")
    p.add_argument("--rate", type=float, default=100.0, help="sample rate, Hz")
    p.add_argument("--duration", type=float, default=1.5, help="pen-down seconds per letter")
    p.add_argument("--noise", type=float, default=0.0, help="noise sigma, m/s^2")
    p.add_argument("--theta-deg", dest="theta_deg", type=float, default=0.0, help="arm angle, degrees")
    p.add_argument("--quiet-ms", dest="quiet_ms", type=float, default=700.0)
    p.add_argument("--gap-ms", dest="gap_ms", type=float, default=1000.0, help="quiet between word letters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output JSONL path (default stdout)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="segment a trace and classify each session")
    p.add_argument("--trace", help="input JSONL path (default stdin)")
    p.add_argument("--templates", help="template JSON file; omit to skip classification")
    p.add_argument("--out", help="output JSONL path (default stdout)")
    p.add_argument("--no-trace", action="store_true", help="omit rotated traces from output")
    p.add_argument(
        "--report-savings",
        action="store_true",
        help="append a record comparing gated vs continuous sample counts",
    )
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("train", help="store one letter's template from a one-session trace")
    p.add_argument("--letter", required=True)
    p.add_argument("--trace", help="input JSONL path (default stdin)")
    p.add_argument("--templates", required=True, help="template JSON file (created if absent)")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify a one-session trace")
    p.add_argument("--trace", help="input JSONL path (default stdin)")
    p.add_argument("--templates", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="run a seeded confusion-matrix experiment")
    p.add_argument("--letters", required=True, help='letter set, e.g. "abjwz"')
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--size-in", dest="size_in", type=float, default=12.0)
    p.add_argument("--noise", type=float, default=DEFAULT_NOISE_SIGMA)
    p.add_argument("--seed", type=int, default=7, help="base seed; template/test seeds derive from it")
    p.add_argument("--template-seed", dest="template_seed", type=int)
    p.add_argument("--test-seed", dest="test_seed", type=int)
    p.add_argument("--format", choices=["csv", "markdown"], default="markdown")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the websocket demo service")
    p.add_argument("--addr", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--templates", help="template JSON file backing the service")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AirwriteError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
