import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import A, B, C, D, E1, E2, E3, elections
from varcommittee import (LINEAR, T1_ZERO, X3C_HARD, ZERO_T1, CapacityError, Election, GnavSpec,
                          Objective, RuleSpec, StepFunction, ThresholdSpec, av_winner, compute,
                          first_majority, gnav_optimize, greedy_mrc, mrc_decision, mrc_smallest,
                          mv_threshold, nav_winners, qcsa_winner, qncsa_winner, threshold_score,
                          threshold_winners, uv_winner)

KINDS = ("smallest", "largest", "all")
THRESHOLDS = [ThresholdSpec.unit(), ThresholdSpec.majority(), ThresholdSpec.full(),
              ThresholdSpec.linear(Fraction(1, 3))]
SPECS = [LINEAR(1, 1), LINEAR(1, 2), T1_ZERO, ZERO_T1, X3C_HARD,
         GnavSpec(StepFunction(((1, 2), (3, 5))), StepFunction.linear(1))]


def agrees(result, family, kind):
    assert set(result.masks) == oracles.select(family, kind)
    assert result.count == len(oracles.select(family, kind))
    assert not result.tie_truncated
    assert result.canonical.mask == oracles.canonical(family, kind)


# -- worked examples ---------------------------------------------------------


def test_av():
    assert av_winner(E1).masks == [A | B]
    assert av_winner(E3).masks == [C | D]
    assert av_winner(Election(3, (0, 0))).masks == [0]


def test_nav():
    assert nav_winners(E2, "smallest").masks == [A]
    assert nav_winners(E2, "largest").masks == [A | B]
    assert nav_winners(E2).score == nav_winners(E2, "largest").score == 2
    assert nav_winners(E1, "smallest").masks == nav_winners(E1, "largest").masks == [A | B]
    r = nav_winners(Election(2, (0, 0)))
    assert r.masks == [0] and r.score == 0


def test_mv():
    assert mv_threshold(E2, Fraction(3, 4)).masks == [A]
    assert mv_threshold(E1, 0).masks == [A | B | C]
    assert mv_threshold(E1, Fraction(1, 2)).masks == [A | B]


def test_gnav():
    r = gnav_optimize(E2, LINEAR(1, 2), "smallest")
    assert r.masks == [A] and r.score == 2
    r = gnav_optimize(E1, X3C_HARD, "any")
    assert r.score == 10 == oracles.gnav_family(E1, X3C_HARD)[0]
    assert r.canonical.mask in oracles.gnav_family(E1, X3C_HARD)[1]
    assert gnav_optimize(E3, T1_ZERO, "largest").canonical.mask == A | B | C | D


def test_mrc():
    r = mrc_smallest(E1, "all")
    assert r.masks == [A | B] and r.size == 2
    assert mrc_smallest(E3).masks == [C | D]
    assert mrc_smallest(Election.from_lists(2, [[0]])).masks == [A]
    assert mrc_smallest(Election(2, (0, 0))).masks == [0]
    assert not mrc_decision(E1, 1) and mrc_decision(E1, 2) and mrc_decision(E3, 4)


def test_greedy():
    assert greedy_mrc(E1, "any").masks == [A | B]
    assert greedy_mrc(E3, "any").masks == [C | D]
    assert greedy_mrc(Election.from_lists(2, [[0, 1]]), "any").masks == [A]
    assert greedy_mrc(Election.from_lists(2, [[0, 1]]), "all").masks == [A, B]


def test_uv():
    assert uv_winner(E1).masks == [0]
    assert uv_winner(Election.from_lists(3, [[0, 2]])).masks == [A | C]
    assert uv_winner(E3).masks == [0]


def test_capped_satisfaction():
    r = qcsa_winner(E1, Fraction(1, 2), "any")
    assert r.masks == [A | B] and r.score == pytest.approx(4 / math.sqrt(2))
    r = qcsa_winner(E1, 1, "smallest")
    assert r.masks == [A, B] and r.score == 2
    assert qcsa_winner(E1, 1, "all").masks == [A, B, A | B]
    r = qcsa_winner(Election.from_lists(3, [[0, 1, 2]]), 0, "smallest")
    assert r.masks == [A | B | C] and r.score == 3
    r = qncsa_winner(E1, Fraction(9, 10), "any")
    assert r.masks == [A | B] and r.score == pytest.approx(1.071773, abs=1e-6)
    r = qncsa_winner(E2, 0, "smallest")
    assert r.masks == [A] and r.score == 2
    assert qncsa_winner(E1, 1, "all").masks == [A, B, A | B]


def test_first_majority():
    r = first_majority(E1)
    assert r.masks == [A | B] and r.score == 4
    assert first_majority(E3).masks == [C | D]
    assert first_majority(Election.from_lists(3, [[1]])).masks == [B]
    r = first_majority(Election(3, (0,)))
    assert r.masks == [0] and r.degenerate


def test_threshold_examples():
    r = threshold_winners(E1, "maj", "smallest")
    assert r.masks == [A | B] and r.score == 3
    r = threshold_winners(E1, "full", "all")
    assert r.masks == [A, B] and r.score == 2
    assert threshold_winners(E1, "unit", "largest").masks == [A | B | C]
    assert threshold_winners(E1, "unit", "smallest").masks == [A | B]


# -- oracle equivalence ------------------------------------------------------


small = elections(max_m=6, max_n=5)
kinds = st.sampled_from(KINDS)


@settings(max_examples=150, deadline=None)
@given(small, kinds)
def test_nav_family(e, kind):
    agrees(nav_winners(e, kind), oracles.nav_family(e)[1], kind)


@settings(max_examples=150, deadline=None)
@given(small, kinds, st.sampled_from(SPECS))
def test_gnav_family(e, kind, spec):
    score, family = oracles.gnav_family(e, spec)
    r = gnav_optimize(e, spec, kind)
    assert r.score == score
    agrees(r, family, kind)
    if spec.is_linear:
        agrees(gnav_optimize(e, spec, kind, exhaustive=True), family, kind)


@settings(max_examples=150, deadline=None)
@given(small, kinds, st.sampled_from(THRESHOLDS))
def test_threshold_family(e, kind, t):
    score, family = oracles.threshold_family(e, t)
    r = threshold_winners(e, t, kind)
    assert r.score == score
    agrees(r, family, kind)


@settings(max_examples=150, deadline=None)
@given(small, kinds, st.sampled_from([0, Fraction(1, 2), Fraction(9, 10), 1]))
def test_prefix_families(e, kind, q):
    for rule, oracle in ((qcsa_winner, oracles.qcsa_family), (qncsa_winner, oracles.qncsa_family)):
        score, family = oracle(e, q)
        r = rule(e, q, kind)
        assert r.score == pytest.approx(score, abs=1e-9)
        agrees(r, family, kind)


@settings(max_examples=150, deadline=None)
@given(small)
def test_covers_and_cutoffs(e):
    k, family = oracles.mrc_family(e)
    agrees(mrc_smallest(e, "all"), family, "all")
    agrees(greedy_mrc(e, "all"), oracles.greedy_family(e), "all")
    assert av_winner(e).masks == [oracles.av_committee(e)]
    assert uv_winner(e).masks == [oracles.uv_committee(e)]
    assert mv_threshold(e, Fraction(2, 3)).masks == [oracles.mv_committee(e, Fraction(2, 3))]
    if sum(e.scores):
        agrees(first_majority(e, "all"), oracles.first_majority_family(e), "all")


# -- structural properties ---------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(elections(max_m=8, max_n=12))
def test_greedy_log_bound(e):
    nonempty = sum(1 for b in e.ballots if b)
    greedy = greedy_mrc(e, "any").size
    assert greedy <= (math.log(max(nonempty, 1)) + 1) * mrc_smallest(e).size + 1e-9
    assert greedy_mrc(e, "any").canonical.mask in oracles.greedy_family(e)


@settings(max_examples=200, deadline=None)
@given(elections(max_m=7, max_n=6))
def test_top_scores_win_at_q_one(e):
    top = max(e.scores)
    for S in qcsa_winner(e, 1, "all").masks:
        assert all(e.scores[c] == top for c in range(e.m) if S >> c & 1)


@settings(max_examples=200, deadline=None)
@given(elections(max_m=7, max_n=6))
def test_zero_exponent_ncsa_is_nav_when_nav_is_nonempty(e):
    nav = nav_winners(e, "smallest")
    if nav.size:
        assert qncsa_winner(e, 0, "smallest").masks == nav.masks


@settings(max_examples=100, deadline=None)
@given(elections(max_m=7, max_n=6))
def test_majority_parity(e):
    t = ThresholdSpec.majority()
    for S in threshold_winners(e, t, "all").masks:
        if S.bit_count() % 2:
            for c in range(e.m):
                if not S >> c & 1:
                    assert threshold_score(e, S | 1 << c, t) >= threshold_score(e, S, t)


# -- beyond the exhaustive limit ----------------------------------------------


def wide(m=26):
    # 26 candidates but only a handful of distinct approver sets
    voters = [[c for c in range(m) if c % 5 in (0, 1)], [c for c in range(m) if c % 5 == 2],
              [c for c in range(m) if c % 5 in (1, 3)], []]
    return Election.from_lists(m, voters)


def test_large_threshold_paths():
    e = wide()
    r = threshold_winners(e, "unit", "smallest")
    assert r.score == 3 and r.size == 2 and threshold_score(e, r.canonical.mask, ThresholdSpec.unit()) == 3
    assert threshold_winners(e, "unit", "largest").size == 26
    r = threshold_winners(e, "maj", "smallest")
    assert threshold_score(e, r.canonical.mask, ThresholdSpec.majority()) == r.score
    with pytest.raises(CapacityError):
        gnav_optimize(e, X3C_HARD)
    assert gnav_optimize(e, LINEAR(1, 1)).size == 0


def test_capped_listing_is_flagged():
    # 12 candidates approved by exactly half: 2^12 NAV winners
    e = Election.from_lists(12, [list(range(12)), []])
    r = nav_winners(e, Objective.all_capped(100))
    assert r.count == 4096 and len(r.masks) == 100 and r.tie_truncated
    assert r.masks == sorted(r.masks, key=lambda mk: (mk.bit_count(), mk))
    assert r.canonical.mask == 0


# -- rule descriptors ----------------------------------------------------------


@pytest.mark.parametrize("text, label", [
    ("av", "av"), ("2/3-nav", "gnav(linear:1:2)"), ("qcsa(0.5)", "qcsa(1/2)"),
    ("mv(3/4)", "mv(3/4)"), ("gnav(x3c-hard)", "gnav(x3c-hard)"),
    ("gnav(f=1:4;g=1:1,2:2)", "gnav(f=1:4;g=1:1,2:2)"), ("threshold(maj)", "threshold(maj)"),
    ("threshold(linear:1/3)", "threshold(linear:1/3)"), ("first-majority", "first-majority"),
])
def test_rule_parsing(text, label):
    spec = RuleSpec.parse(text)
    assert spec.label == label
    assert RuleSpec.parse(spec.label) == spec


@pytest.mark.parametrize("text", ["borda", "qcsa", "mv", "qcsa(2)", "av(1)", "gnav", "threshold(x)"])
def test_rule_parsing_rejects(text):
    with pytest.raises(ValueError):
        RuleSpec.parse(text)


def test_rule_keywords_and_compute():
    assert RuleSpec.parse("qncsa", q="1/2").q == Fraction(1, 2)
    assert RuleSpec.parse("threshold", alpha="1/3").threshold == ThresholdSpec.linear(Fraction(1, 3))
    assert compute(E1, "gnav(x3c-hard)").score == 10
    assert RuleSpec.parse("qcsa(1)").with_param("q", Fraction(1, 2)).label == "qcsa(1/2)"
    with pytest.raises(ValueError):
        RuleSpec.parse("av").with_param("q", 1)
