#!/usr/bin/env python3
"""Reproduce the letter-set confusion experiments.

Runs the distinct five-letter set at 12 and 6 inches with paired seeds,
then the similar-shape set, printing one markdown report per run. Pass
--full-alphabet for the 26-letter matrix (slower).
"""

import argparse

from airwrite.evaluate import (
    DEFAULT_NOISE_SIGMA,
    ExperimentSpec,
    accuracy,
    paired_size_comparison,
    report,
    run_experiment,
)
from airwrite.synth import INCH

DISTINCT = tuple("abjwz")
SIMILAR = tuple("adgqu")


def show(title: str, matrix) -> None:
    print(f"## {title}\n")
    print(report(matrix, "markdown"))
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100, help="trials per letter")
    ap.add_argument("--noise", type=float, default=DEFAULT_NOISE_SIGMA, help="noise sigma, m/s^2")
    ap.add_argument("--seed", type=int, default=1, help="template seed; test seed is seed+1")
    ap.add_argument("--full-alphabet", action="store_true")
    args = ap.parse_args()

    def spec(letters: tuple) -> ExperimentSpec:
        return ExperimentSpec(
            letters=letters,
            trials_per_letter=args.trials,
            noise_sigma=args.noise,
            template_seed=args.seed,
            test_seed=args.seed + 1,
        )

    big, small = paired_size_comparison(spec(DISTINCT), small_size=6 * INCH)
    show("distinct letters, 12 inch", big)
    show("distinct letters, 6 inch", small)
    show("similar letters, 12 inch", run_experiment(spec(SIMILAR)))
    if args.full_alphabet:
        matrix = run_experiment(spec(tuple("abcdefghijklmnopqrstuvwxyz")))
        _, mean = accuracy(matrix)
        show(f"full alphabet, 12 inch (mean {100 * mean:.1f}%)", matrix)


if __name__ == "__main__":
    main()
