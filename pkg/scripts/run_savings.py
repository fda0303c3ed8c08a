#!/usr/bin/env python3
"""Transfer savings from session gating, per word.

Synthesizes each word with quiet gaps between letters, runs the detection
pipeline, and compares gated sample counts against streaming everything.
"""

import argparse

from airwrite.pipeline import PipelineConfig, run_pipeline
from airwrite.session import TransferLedger
from airwrite.synth import SynthSpec, synthesize_word

WORDS = ("pizza", "chicken", "cake", "wine", "coffee")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("words", nargs="*", default=list(WORDS))
    ap.add_argument("--gap-ms", type=float, default=1000.0, help="quiet between letters")
    ap.add_argument("--noise", type=float, default=0.0, help="noise sigma, m/s^2")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = SynthSpec(noise_sigma=args.noise, rng_seed=args.seed)
    config = PipelineConfig()
    print(f"{'word':<10} {'sessions':>8} {'continuous':>10} {'gated':>8} {'savings':>8}")
    for word in args.words:
        trace = synthesize_word(word, spec, gap_ms=args.gap_ms)
        results = run_pipeline(trace, config, None)
        ledger = TransferLedger(
            continuous_count=len(trace),
            gated_count=sum(len(r.matrix) for r in results),
        )
        print(
            f"{word:<10} {len(results):>8} {ledger.continuous_count:>10} "
            f"{ledger.gated_count:>8} {ledger.savings():>7.1f}%"
        )


if __name__ == "__main__":
    main()
