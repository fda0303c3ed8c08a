#!/usr/bin/env python3
"""Mean accuracy across a noise grid for a fixed letter set.

Templates stay noise-free; only the test traces degrade. Useful for
finding where classification actually starts to break down.
"""

import argparse

from airwrite.evaluate import ExperimentSpec, accuracy, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--letters", default="abjwz")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument(
        "--sigmas",
        default="0.0,0.2,0.5,1.0,1.5,2.0,2.5,3.0",
        help="comma-separated noise levels, m/s^2",
    )
    args = ap.parse_args()

    sigmas = [float(s) for s in args.sigmas.split(",") if s.strip()]
    print(f"{'sigma':>6} {'mean accuracy':>14}")
    for sigma in sigmas:
        spec = ExperimentSpec(
            letters=tuple(args.letters),
            trials_per_letter=args.trials,
            noise_sigma=sigma,
            template_seed=args.seed,
            test_seed=args.seed + 1,
        )
        _, mean = accuracy(run_experiment(spec))
        print(f"{sigma:>6.2f} {100 * mean:>13.1f}%")


if __name__ == "__main__":
    main()
