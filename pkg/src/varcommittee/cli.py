"""Command line: ``varcommittee compute|experiment|sweep|formats``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 instance beyond
the exhaustive-search capacity, 4 invalid rule or parameter.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .experiments import ExperimentConfig, grid, run_experiment, sweep, to_csv
from .model import ParseError, read_election
from .outcome import DEFAULT_CAP, CapacityError, Objective
from .rules import RULE_NAMES, RuleSpec
from .scoring import fraction_str, to_fraction

EXIT_PARSE, EXIT_CAPACITY, EXIT_RULE = 2, 3, 4


class RuleError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varcommittee", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def rule_flags(p, default_objective="smallest"):
        p.add_argument("--rule", required=True, help="e.g. av, nav, qncsa(0.5), threshold(maj)")
        p.add_argument("--objective", choices=("smallest", "largest", "any", "all"),
                       default=default_objective)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max co-winners listed")
        p.add_argument("--q", type=_rational, help="exponent for qcsa/qncsa")
        p.add_argument("--alpha", type=_rational, help="fraction for mv or a linear threshold")
        p.add_argument("--out", help="output path (default: standard output)")

    c = sub.add_parser("compute", help="winning committees of an election file")
    c.add_argument("--input", required=True)
    c.add_argument("--format", choices=("json", "plain"))
    rule_flags(c)

    for name, helptext in (("experiment", "one Monte Carlo configuration"),
                           ("sweep", "Monte Carlo over a grid of p or q")):
        e = sub.add_parser(name, help=helptext)
        rule_flags(e)
        e.add_argument("--m", type=int, default=20)
        e.add_argument("--n", type=int, default=20)
        e.add_argument("--p", type=_rational, default=Fraction(1, 2))
        e.add_argument("--trials", type=int, default=10_000)
        e.add_argument("--seed", type=int, default=0)
        e.add_argument("--workers", type=int, default=1)
        if name == "sweep":
            e.add_argument("--var", choices=("p", "q"), required=True)
            e.add_argument("--from", dest="start", type=_rational, required=True)
            e.add_argument("--to", dest="stop", type=_rational, required=True)
            e.add_argument("--step", type=_rational, required=True)

    sub.add_parser("formats", help="describe input formats and rule names")
    return parser


def _rule(args) -> RuleSpec:
    objective = Objective(args.objective, args.cap) if args.objective != "any" else Objective.any()
    try:
        return RuleSpec.parse(args.rule, q=args.q, alpha=args.alpha, objective=objective)
    except (ValueError, ZeroDivisionError) as exc:
        raise RuleError(str(exc)) from None


def _jsonable(score):
    if isinstance(score, Fraction):
        return int(score) if score.denominator == 1 else fraction_str(score)
    return score


def render_result(rule: RuleSpec, result, names=None) -> str:
    doc = {
        "rule": rule.label,
        "objective": rule.objective.kind,
        "score": _jsonable(result.score),
        "size": result.size,
        "committee": list(result.canonical.members),
        "co_winners": result.count,
        "listed": [list(c.members) for c in result.committees],
        "truncated": result.tie_truncated,
    }
    if result.degenerate:
        doc["degenerate"] = True
    if names is not None:
        doc["committee_names"] = [names[c] for c in result.canonical.members]
    return json.dumps(doc) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, rule: RuleSpec) -> ExperimentConfig:
    if args.trials < 1 or args.m < 1 or args.n < 1:
        raise RuleError("m, n and trials must be positive")
    if not 0 <= args.p <= 1:
        raise RuleError("p must lie in [0, 1]")
    return ExperimentConfig(rule, m=args.m, n=args.n, p=args.p, trials=args.trials,
                            seed=args.seed, workers=args.workers)


FORMATS_TEXT = """\
plain: first line "m n", then n lines; line i lists voter i's approved
       candidate indices (0-based, space separated); an empty line is an
       empty ballot.
json:  {"m": 3, "voters": [[0], [0, 1], [1]], "names": ["a", "b", "c"]}
       ("names" optional)
rules: """ + ", ".join(RULE_NAMES) + """
       parameters: mv(ALPHA), qcsa(Q), qncsa(Q), threshold(unit|maj|full|linear:ALPHA),
       gnav(t1-zero|zero-t1|x3c-hard|linear:A:B|f=T:V,...;g=T:V,...), alias 2/3-nav
"""


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "formats":
            sys.stdout.write(FORMATS_TEXT)
            return 0
        rule = _rule(args)
        if args.command == "compute":
            try:
                election = read_election(args.input, args.format)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_PARSE
            result = rule.evaluate(election)
            _emit(render_result(rule, result, election.names), args.out)
        elif args.command == "experiment":
            _emit(to_csv([run_experiment(_config(args, rule))]), args.out)
        else:
            try:
                values = grid(args.start, args.stop, args.step)
                stats = sweep(_config(args, rule), args.var, values)
            except ValueError as exc:
                raise RuleError(str(exc)) from None
            _emit(to_csv(stats), args.out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (RuleError, ValueError) as exc:
        print(f"invalid rule or parameter: {exc}", file=sys.stderr)
        return EXIT_RULE
    return 0


if __name__ == "__main__":
    sys.exit(main())
