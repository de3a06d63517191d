"""Write the CSV data behind the committee-size plots.

* ``csa_ncsa_q.csv``: q-CSA and q-NCSA over q in [0, 1], step 0.01.
* ``p_sweep.csv``: NAV, MRC and GreedyMRC over p in {0.05, ..., 0.95}.
"""

import argparse
from pathlib import Path

from varcommittee import Objective, RuleSpec
from varcommittee.experiments import ExperimentConfig, grid, sweep, to_csv


def main(argv=None):
    parser = argparse.ArgumentParser(description="committee-size sweeps as CSV")
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--voters", type=int, nargs="+", default=[20, 100])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    q_rows, p_rows = [], []
    for n in args.voters:
        for name in ("qcsa", "qncsa"):
            base = ExperimentConfig(RuleSpec(name, q=0), n=n, trials=args.trials, seed=args.seed,
                                    workers=args.workers)
            q_rows += sweep(base, "q", grid(0, 1, "0.01"))
        for text, objective in (("nav", "smallest"), ("mrc", "smallest"), ("greedy-mrc", "any")):
            obj = Objective.any() if objective == "any" else Objective(objective)
            base = ExperimentConfig(RuleSpec.parse(text, objective=obj), n=n, trials=args.trials,
                                    seed=args.seed, workers=args.workers)
            p_rows += sweep(base, "p", grid("0.05", "0.95", "0.05"))
    (out / "csa_ncsa_q.csv").write_text(to_csv(q_rows))
    (out / "p_sweep.csv").write_text(to_csv(p_rows))
    print(f"wrote {out / 'csa_ncsa_q.csv'} and {out / 'p_sweep.csv'}")


if __name__ == "__main__":
    main()
