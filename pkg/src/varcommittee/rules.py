"""Winner determination for approval elections with a variable number of winners.

Every rule returns a :class:`~varcommittee.outcome.WinnerResult`. Rules with
an optimized score report that score; for the cutoff rules (AV, MV, UV) the
score is the approval cutoff every member meets, for MRC and GreedyMRC it is
the committee size and for FirstMajority the approvals held by the prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import Election, bits
from .outcome import (DEFAULT_CAP, Block, BlockFamily, CapacityError, Objective,
                      WinnerResult, resolve)
from .scoring import (LINEAR, GnavSpec, Rational, StepFunction, ThresholdSpec,
                      fraction_str, gnav_preset, parse_threshold, to_fraction)
from .solvers import (MAX_EXHAUSTIVE, CoverFamily, ScanFamily, has_cover_of_size,
                      threshold_best_N)

SCORE_TOL = 1e-9


def _objective(obj: Objective | str | None) -> Objective:
    if obj is None:
        return Objective.smallest()
    if isinstance(obj, str):
        return Objective("any", 1) if obj == "any" else Objective(obj)
    return obj


def _band(scores, value) -> int:
    return sum(1 << c for c, s in enumerate(scores) if s == value)


def _above(scores, value) -> int:
    return sum(1 << c for c, s in enumerate(scores) if s > value)


# -- cutoff rules ------------------------------------------------------------


def av_winner(e: Election, obj=None) -> WinnerResult:
    """Every candidate with the top approval score; nobody if no approvals were cast."""
    top = max(e.scores)
    winner = _band(e.scores, top) if top > 0 else 0
    return resolve(BlockFamily.of([winner]), top, _objective(obj), e.m)


def mv_threshold(e: Election, alpha: Rational, obj=None) -> WinnerResult:
    a = to_fraction(alpha)
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    cutoff = a * e.n
    winner = sum(1 << c for c, s in enumerate(e.scores) if s >= cutoff)
    return resolve(BlockFamily.of([winner]), cutoff, _objective(obj), e.m)


def uv_winner(e: Election, obj=None) -> WinnerResult:
    winner = _band(e.scores, e.n)
    return resolve(BlockFamily.of([winner]), e.n, _objective(obj), e.m)


# -- net approval ------------------------------------------------------------


def _linear_family(e: Election, a: int, b: int) -> tuple[BlockFamily, int]:
    # per-candidate gain (a+b)s(c) - bn; zero-gain candidates are optional
    gains = [(a + b) * s - b * e.n for s in e.scores]
    must = sum(1 << c for c, g in enumerate(gains) if g > 0)
    optional = sum(1 << c for c, g in enumerate(gains) if g == 0)
    blocks = [Block(must, optional, j) for j in range(optional.bit_count() + 1)]
    return BlockFamily(blocks), sum(g for g in gains if g > 0)


def nav_winners(e: Election, obj=None) -> WinnerResult:
    """Strict-majority candidates plus any subset of the exactly-half ones."""
    family, score = _linear_family(e, 1, 1)
    return resolve(family, score, _objective(obj), e.m)


def gnav_table(spec: GnavSpec, m: int) -> np.ndarray:
    table = np.zeros((m + 1, m + 1), np.int64)
    for k in range(m + 1):
        for a in range(k + 1):
            table[k, a] = spec.f(a) - spec.g(k - a)
    return table


def gnav_optimize(e: Election, spec: GnavSpec, obj=None, *, exhaustive: bool = False) -> WinnerResult:
    """Maximize the (f, g)-NAV score over all committees, the empty one included.

    Linear f(x)=a*x, g(x)=b*x decompose per candidate and are solved
    directly; anything else is enumerated (m <= 24).
    """
    objective = _objective(obj)
    if spec.is_linear and not exhaustive:
        family, score = _linear_family(e, spec.f.slope, spec.g.slope)
        return resolve(family, score, objective, e.m)
    scan = ScanFamily(e.ballots, e.m, gnav_table(spec, e.m), include_empty=True)
    return resolve(scan, scan.best, objective, e.m)


# -- covering rules ----------------------------------------------------------


def mrc_smallest(e: Election, obj=None) -> WinnerResult:
    """Minimum committees giving every voter with a nonempty ballot a representative."""
    objective = _objective(obj)
    family = CoverFamily(e.ballots, e.m, objective.cap)
    return resolve(family, family.result.size, objective, e.m)


def mrc_decision(e: Election, k: int) -> bool:
    return has_cover_of_size(e.ballots, e.m, k)


def _greedy_path(e: Election) -> int:
    remaining = [b for b in e.ballots if b]
    committee = 0
    while remaining:
        counts = [0] * e.m
        for b in remaining:
            for c in bits(b):
                counts[c] += 1
        pick = counts.index(max(counts))
        committee |= 1 << pick
        remaining = [b for b in remaining if not b >> pick & 1]
    return committee


def greedy_mrc(e: Election, obj=None) -> WinnerResult:
    """Greedy cover; co-winners are the outcomes of all tie-breaking orders.

    The canonical (``any``) winner breaks ties toward the lowest index.
    """
    objective = _objective(obj)
    path = _greedy_path(e)
    if objective.kind == "any":
        return resolve(BlockFamily.of([path]), path.bit_count(), objective, e.m, preferred=path)

    # explore every tie choice; committees determine the state, so memoize them
    outcomes: set[int] = set()
    seen: set[int] = set()
    limit = max(objective.cap, DEFAULT_CAP) * 16
    stack = [0]
    complete = True
    nonempty = [b for b in e.ballots if b]
    while stack:
        committee = stack.pop()
        if committee in seen:
            continue
        if len(seen) >= limit:
            complete = False
            break
        seen.add(committee)
        remaining = [b for b in nonempty if not b & committee]
        if not remaining:
            outcomes.add(committee)
            continue
        counts = [0] * e.m
        for b in remaining:
            for c in bits(b):
                counts[c] += 1
        top = max(counts)
        for c in reversed([c for c, v in enumerate(counts) if v == top]):
            stack.append(committee | 1 << c)
    family = BlockFamily.of(sorted(outcomes), complete=complete)
    sizes = family.sizes()
    # the score is the size of the reported committees
    size = sizes[-1] if objective.kind == "largest" else sizes[0]
    return resolve(family, size, objective, e.m, preferred=path)


# -- (net) capped satisfaction and FirstMajority ------------------------------


def _prefix_rule(e: Election, q: Rational, net: bool, obj) -> WinnerResult:
    q = float(to_fraction(q))
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    ordered = sorted(e.scores, reverse=True)
    prefix = 0
    values = []
    for k, s in enumerate(ordered, start=1):
        prefix += s
        numerator = 2 * prefix - k * e.n if net else prefix
        values.append(numerator / k ** q)
    best = max(values)
    blocks = []
    for k, v in enumerate(values, start=1):
        if v >= best - SCORE_TOL:
            cutoff = ordered[k - 1]
            above = _above(e.scores, cutoff)
            blocks.append(Block(above, _band(e.scores, cutoff), k - above.bit_count()))
    return resolve(BlockFamily(blocks), best, _objective(obj), e.m)


def qcsa_winner(e: Election, q: Rational, obj=None) -> WinnerResult:
    """Best committee among the top-k prefixes of the approval order.

    Any size-k committee holds at most the top k approval scores and the
    divisor depends on k only, so each size is won by a prefix; every
    ordering of tied candidates gives a co-winning prefix.
    """
    return _prefix_rule(e, q, False, obj)


def qncsa_winner(e: Election, q: Rational, obj=None) -> WinnerResult:
    return _prefix_rule(e, q, True, obj)


def first_majority(e: Election, obj=None) -> WinnerResult:
    """Shortest approval-order prefix holding more approvals than the rest."""
    objective = _objective(obj)
    total = sum(e.scores)
    if total == 0:
        return resolve(BlockFamily.of([0]), 0, objective, e.m, degenerate=True)
    ordered = sorted(e.scores, reverse=True)
    prefix = 0
    for j, s in enumerate(ordered, start=1):
        prefix += s
        if prefix > total - prefix:
            break
    cutoff = ordered[j - 1]
    above = _above(e.scores, cutoff)
    block = Block(above, _band(e.scores, cutoff), j - above.bit_count())
    return resolve(BlockFamily([block]), prefix, objective, e.m)


# -- threshold rules ---------------------------------------------------------


def threshold_table(t: ThresholdSpec, m: int) -> np.ndarray:
    table = np.zeros((m + 1, m + 1), np.int64)
    for k in range(1, m + 1):
        need = t.required(k)
        table[k, need:] = 1
    return table


def threshold_winners(e: Election, t: ThresholdSpec | str, obj=None) -> WinnerResult:
    """Nonempty committees approved by the most voters, a voter approving S
    when ``|S & ballot| >= t(|S|)``.

    Up to 24 candidates everything is enumerated. Beyond that, t_unit
    reduces to covers (winners are exactly the covers of the nonempty
    ballots) and linear thresholds use the candidate-type program.
    """
    if isinstance(t, str):
        t = parse_threshold(t)
    objective = _objective(obj)
    if e.m <= MAX_EXHAUSTIVE:
        scan = ScanFamily(e.ballots, e.m, threshold_table(t, e.m), include_empty=False)
        return resolve(scan, scan.best, objective, e.m)
    if t.kind == "unit":
        return _unit_threshold(e, objective)
    return threshold_best_N(e, t, objective)


def _unit_threshold(e: Election, objective: Objective) -> WinnerResult:
    nonempty = [b for b in e.ballots if b]
    score = len(nonempty)
    if objective.kind == "largest":
        full = e.all_candidates
        return resolve(BlockFamily.of([full]), score, objective, e.m)
    if objective.kind == "all":
        raise CapacityError("listing every cover needs the exhaustive path (m <= 24)")
    if not nonempty:
        singles = BlockFamily([Block(0, e.all_candidates, 1)])
        return resolve(singles, 0, objective, e.m)
    return resolve(CoverFamily(e.ballots, e.m, objective.cap), score, objective, e.m)


# -- rule descriptors --------------------------------------------------------

RULE_NAMES = ("av", "nav", "mv", "gnav", "mrc", "greedy-mrc", "uv", "qcsa", "qncsa",
              "first-majority", "threshold")


@dataclass(frozen=True)
class RuleSpec:
    """A rule, its parameters and the objective used to report winners."""

    name: str
    q: Fraction | None = None
    alpha: Fraction | None = None
    gnav: GnavSpec | None = None
    threshold: ThresholdSpec | None = None
    objective: Objective = field(default_factory=Objective.smallest)

    def __post_init__(self):
        if self.name not in RULE_NAMES:
            raise ValueError(f"unknown rule {self.name!r}")
        if self.name in ("qcsa", "qncsa"):
            if self.q is None:
                raise ValueError(f"{self.name} needs a q parameter")
            object.__setattr__(self, "q", to_fraction(self.q))
            if not 0 <= self.q <= 1:
                raise ValueError("q must lie in [0, 1]")
        if self.name == "mv":
            if self.alpha is None:
                raise ValueError("mv needs an alpha parameter")
            object.__setattr__(self, "alpha", to_fraction(self.alpha))
        if self.name == "gnav" and self.gnav is None:
            raise ValueError("gnav needs an (f, g) specification")
        if self.name == "threshold" and self.threshold is None:
            raise ValueError("threshold needs a threshold function")

    @classmethod
    def parse(cls, text: str, *, q=None, alpha=None, objective: Objective | None = None) -> RuleSpec:
        """Parse ``av``, ``mv(3/4)``, ``qncsa(0.5)``, ``threshold(maj)``,
        ``gnav(x3c-hard)``, ``gnav(f=1:4;g=1:1,2:2)`` and similar.

        A parenthesized parameter wins over the ``q``/``alpha`` keywords.
        """
        text = text.strip().lower()
        match = re.fullmatch(r"([a-z0-9/\-]+)(?:\((.*)\))?", text)
        if not match:
            raise ValueError(f"cannot parse rule {text!r}")
        name, arg = match.group(1), match.group(2)
        objective = objective or Objective.smallest()
        if name in ("2/3-nav",):
            return cls("gnav", gnav=LINEAR(1, 2), objective=objective)
        if name in ("qcsa", "qncsa"):
            return cls(name, q=to_fraction(arg if arg is not None else _required(q, name, "q")),
                       objective=objective)
        if name == "mv":
            return cls(name, alpha=to_fraction(arg if arg is not None else _required(alpha, name, "alpha")),
                       objective=objective)
        if name == "gnav":
            if arg is None:
                raise ValueError("gnav needs a preset or f=...;g=... argument")
            return cls(name, gnav=_parse_gnav(arg), objective=objective)
        if name == "threshold":
            if arg is None and alpha is not None:
                return cls(name, threshold=ThresholdSpec.linear(alpha), objective=objective)
            if arg is None:
                raise ValueError("threshold needs unit, maj, full or linear:alpha")
            return cls(name, threshold=parse_threshold(arg), objective=objective)
        if arg is not None:
            raise ValueError(f"rule {name} takes no parameter")
        return cls(name, objective=objective)

    @property
    def label(self) -> str:
        if self.name in ("qcsa", "qncsa"):
            return f"{self.name}({fraction_str(self.q)})"
        if self.name == "mv":
            return f"mv({fraction_str(self.alpha)})"
        if self.name == "gnav":
            spec = self.gnav.to_json()
            return f"gnav({spec if isinstance(spec, str) else _gnav_text(self.gnav)})"
        if self.name == "threshold":
            return f"threshold({self.threshold.label})"
        return self.name

    def with_param(self, variable: str, value) -> RuleSpec:
        if variable == "q":
            if self.name not in ("qcsa", "qncsa"):
                raise ValueError("only qcsa and qncsa take a q parameter")
            return RuleSpec(self.name, q=value, objective=self.objective)
        raise ValueError(f"cannot vary {variable!r} on a rule")

    def evaluate(self, e: Election, objective: Objective | None = None) -> WinnerResult:
        obj = objective or self.objective
        name = self.name
        if name == "av":
            return av_winner(e, obj)
        if name == "nav":
            return nav_winners(e, obj)
        if name == "mv":
            return mv_threshold(e, self.alpha, obj)
        if name == "gnav":
            return gnav_optimize(e, self.gnav, obj)
        if name == "mrc":
            return mrc_smallest(e, obj)
        if name == "greedy-mrc":
            return greedy_mrc(e, obj)
        if name == "uv":
            return uv_winner(e, obj)
        if name == "qcsa":
            return qcsa_winner(e, self.q, obj)
        if name == "qncsa":
            return qncsa_winner(e, self.q, obj)
        if name == "first-majority":
            return first_majority(e, obj)
        return threshold_winners(e, self.threshold, obj)


def _required(value, name, param):
    if value is None:
        raise ValueError(f"{name} needs a {param} parameter")
    return value


def _parse_steps(text: str) -> StepFunction:
    text = text.strip()
    if text.startswith("linear:"):
        return StepFunction.linear(int(text.split(":", 1)[1]))
    if text in ("", "0"):
        return StepFunction()
    pairs = []
    for item in text.split(","):
        t, v = item.split(":")
        pairs.append((int(t), int(v)))
    return StepFunction(tuple(pairs))


def _parse_gnav(arg: str) -> GnavSpec:
    arg = arg.strip()
    if "=" not in arg:
        return gnav_preset(arg)
    parts = dict(item.split("=", 1) for item in arg.split(";"))
    if set(parts) != {"f", "g"}:
        raise ValueError("custom gnav needs exactly f=... and g=...")
    return GnavSpec(_parse_steps(parts["f"]), _parse_steps(parts["g"]))


def _gnav_text(spec: GnavSpec) -> str:
    def fmt(fn):
        if fn.slope:
            return f"linear:{fn.slope}"
        return ",".join(f"{t}:{v}" for t, v in fn.breakpoints) or "0"
    return f"f={fmt(spec.f)};g={fmt(spec.g)}"


def compute(e: Election, rule: RuleSpec | str, objective: Objective | None = None) -> WinnerResult:
    if isinstance(rule, str):
        rule = RuleSpec.parse(rule)
    return rule.evaluate(e, objective)
