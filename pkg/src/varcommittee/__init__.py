"""Exact winner determination for approval elections with a variable number of winners."""

from .model import (CandidateSet, CandidateType, Election, ParseError, approval_scores,
                    candidate_types, parse_election, read_election, serialize_election)
from .outcome import CapacityError, Objective, WinnerResult
from .rules import (RuleSpec, av_winner, compute, first_majority, gnav_optimize, greedy_mrc,
                    mrc_decision, mrc_smallest, mv_threshold, nav_winners, qcsa_winner,
                    qncsa_winner, threshold_winners, uv_winner)
from .scoring import (LINEAR, T1_ZERO, X3C_HARD, ZERO_T1, GnavSpec, StepFunction, ThresholdSpec,
                      gnav_score, nav_score, qcsa_score, qncsa_score, threshold_satisfies,
                      threshold_score)

__version__ = "0.1.0"
