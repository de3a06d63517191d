"""Monte Carlo committee-size experiments on random approval elections.

Elections are impartial: each voter approves each candidate independently
with probability p. Trial ``i`` of a run with master seed ``s`` draws from a
PCG64 generator seeded through ``numpy.random.SeedSequence([s, i])``, so a
trial's election depends only on (s, i) and never on how trials are split
across workers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .model import Election
from .outcome import Objective
from .rules import RuleSpec
from .scoring import fraction_str, to_fraction

CSV_COLUMNS = ("rule", "objective", "m", "n", "p", "q", "trials", "seed", "mean_size", "std_size")
SEED_MASK = (1 << 64) - 1


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & SEED_MASK, trial])))


def random_election(m: int, n: int, p: float, seed: int | np.random.Generator) -> Election:
    """Draw an election with n*m Bernoulli(p) approvals, voter-major order."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed, 0)
    approve = rng.random((n, m)) < p
    weights = 1 << np.arange(m, dtype=object) if m > 62 else 1 << np.arange(m, dtype=np.int64)
    ballots = tuple(int(x) for x in (approve * weights).sum(axis=1))
    return Election(m, ballots)


@dataclass(frozen=True)
class ExperimentConfig:
    rule: RuleSpec
    m: int = 20
    n: int = 20
    p: Fraction = Fraction(1, 2)
    trials: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", to_fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass(frozen=True)
class ExperimentStats:
    rule: str
    objective: str
    m: int
    n: int
    p: Fraction
    q: Fraction | None
    trials: int
    seed: int
    mean_size: float
    std_size: float
    sizes: np.ndarray = field(repr=False, compare=False, default=None)

    def row(self) -> dict:
        return {
            "rule": self.rule,
            "objective": self.objective,
            "m": self.m,
            "n": self.n,
            "p": fraction_str(self.p),
            "q": "" if self.q is None else fraction_str(self.q),
            "trials": self.trials,
            "seed": self.seed,
            "mean_size": f"{self.mean_size:.6f}",
            "std_size": f"{self.std_size:.6f}",
        }


def _sizes(rule: RuleSpec, m: int, n: int, p: float, seed: int, trials: Sequence[int]) -> list[int]:
    # only the canonical committee matters, so never enumerate co-winners
    objective = rule.objective if rule.objective.kind == "any" else Objective(rule.objective.kind, 1)
    out = []
    for i in trials:
        e = random_election(m, n, p, trial_rng(seed, i))
        out.append(len(rule.evaluate(e, objective).canonical))
    return out


def trial_sizes(cfg: ExperimentConfig) -> np.ndarray:
    """Canonical committee size of every trial, in trial order."""
    p = float(cfg.p)
    indices = range(cfg.trials)
    if cfg.workers <= 1:
        return np.asarray(_sizes(cfg.rule, cfg.m, cfg.n, p, cfg.seed, indices), dtype=np.int64)
    chunk = math.ceil(cfg.trials / cfg.workers)
    parts = [indices[i:i + chunk] for i in range(0, cfg.trials, chunk)]
    with ProcessPoolExecutor(cfg.workers) as pool:
        futures = [pool.submit(_sizes, cfg.rule, cfg.m, cfg.n, p, cfg.seed, part) for part in parts]
        sizes = [s for f in futures for s in f.result()]
    return np.asarray(sizes, dtype=np.int64)


def summarize(cfg: ExperimentConfig, sizes: np.ndarray) -> ExperimentStats:
    mean = float(sizes.mean())
    std = float(sizes.std(ddof=1)) if len(sizes) > 1 else 0.0
    return ExperimentStats(
        rule=cfg.rule.label,
        objective=cfg.rule.objective.kind,
        m=cfg.m,
        n=cfg.n,
        p=cfg.p,
        q=cfg.rule.q,
        trials=cfg.trials,
        seed=cfg.seed,
        mean_size=mean,
        std_size=std,
        sizes=sizes,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentStats:
    return summarize(cfg, trial_sizes(cfg))


def sweep(base: ExperimentConfig, variable: str, values: Sequence) -> list[ExperimentStats]:
    """One experiment per value of ``p`` (approval probability) or ``q`` ((N)CSA exponent)."""
    if variable not in ("p", "q"):
        raise ValueError("sweep variable must be 'p' or 'q'")
    if variable == "q" and base.rule.name not in ("qcsa", "qncsa"):
        raise ValueError("a q sweep needs a qcsa or qncsa rule")
    out = []
    for v in values:
        if variable == "p":
            cfg = replace(base, p=to_fraction(v))
        else:
            cfg = replace(base, rule=base.rule.with_param("q", to_fraction(v)))
        out.append(run_experiment(cfg))
    return out


def grid(start, stop, step) -> list[Fraction]:
    """Inclusive arithmetic grid in exact arithmetic."""
    start, stop, step = (to_fraction(x) for x in (start, stop, step))
    if step <= 0:
        raise ValueError("step must be positive")
    count = int((stop - start) / step) + 1
    return [start + i * step for i in range(max(count, 0))]


def to_csv(stats: Sequence[ExperimentStats]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for s in stats:
        writer.writerow(s.row())
    return buf.getvalue()
