"""Reproduce the average committee sizes of the 20- and 100-voter table.

    python3 scripts/reproduce_sizes.py --trials 10000 --out sizes.csv
"""

import argparse
import sys
import time

from varcommittee import Objective, RuleSpec
from varcommittee.experiments import ExperimentConfig, run_experiment, to_csv

ROWS = [
    ("2/3-nav", "smallest"), ("av", "smallest"), ("qncsa(0.9)", "smallest"), ("mrc", "smallest"),
    ("greedy-mrc", "any"), ("threshold(maj)", "smallest"), ("qncsa(0.5)", "smallest"),
    ("qcsa(0.9)", "smallest"), ("threshold(maj)", "largest"), ("nav", "smallest"),
    ("first-majority", "smallest"), ("qcsa(0.5)", "smallest"),
]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--threshold-trials", type=int, default=2_000,
                        help="trials for the t_maj rows at n=100 (exhaustive search)")
    parser.add_argument("--voters", type=int, nargs="+", default=[20, 100])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", help="CSV path (default: standard output)")
    args = parser.parse_args(argv)

    stats = []
    for n in args.voters:
        for text, objective in ROWS:
            obj = Objective.any() if objective == "any" else Objective(objective)
            spec = RuleSpec.parse(text, objective=obj)
            slow = spec.name == "threshold" and n > 20
            cfg = ExperimentConfig(spec, n=n, trials=args.threshold_trials if slow else args.trials,
                                   seed=args.seed, workers=args.workers)
            start = time.perf_counter()
            s = run_experiment(cfg)
            print(f"n={n:<4} {spec.label:<16} {objective:<9} {s.mean_size:6.2f} +- {s.std_size:4.2f}"
                  f"  ({time.perf_counter() - start:.0f}s)", file=sys.stderr)
            stats.append(s)
    text = to_csv(stats)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
