from __future__ import annotations

import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from guandan.combos import PASS, ComboKind as K
from guandan.errors import InvalidInput
from guandan.fixtures import reference_observation
from guandan.recommender import (
    ScoreWeights,
    ScoredAction,
    heuristic_score,
    reco_agent,
    score_actions,
    top_k,
)


def test_reference_scores_follow_the_weights():
    obs = reference_observation()
    w = ScoreWeights()
    pair, _ = obs.legal_actions
    # teammate owns the table, so no incumbent bonus
    assert heuristic_score(obs, pair) == pytest.approx(2 * w.per_card + 12 * w.per_rank_step)
    assert heuristic_score(obs, PASS) == w.pass_score


def test_opponent_incumbent_bonus_applies():
    obs = reference_observation()
    swapped = replace(obs, last_play=(1, obs.last_play[1]))
    pair = obs.legal_actions[0]
    assert heuristic_score(swapped, pair) - heuristic_score(obs, pair) == pytest.approx(ScoreWeights().opponent_incumbent)


def test_scores_sorted_descending_and_stable():
    obs = reference_observation()
    scored = score_actions(obs)
    assert [s.action for s in scored] == list(obs.legal_actions)
    flat = score_actions(obs, scorer=type("Flat", (), {"score": lambda self, o, a: 0.0})())
    assert [s.action for s in flat] == list(obs.legal_actions)


def test_non_finite_score_rejected():
    bad = type("Bad", (), {"score": lambda self, o, a: math.nan})()
    with pytest.raises(InvalidInput):
        score_actions(reference_observation(), bad)


def _fake(n, with_pass_at=None):
    out = [ScoredAction(f"a{i}", float(-i)) for i in range(n)]
    if with_pass_at is not None:
        out[with_pass_at] = ScoredAction(PASS, float(-with_pass_at))
    return out


@given(st.integers(1, 30), st.integers(1, 10))
def test_top_k_keeps_prefix(n, k):
    scored = _fake(n)
    assert top_k(scored, k) == scored[:k]


def test_top_k_appends_pass_when_cut():
    scored = _fake(10, with_pass_at=8)
    kept = top_k(scored, 3)
    assert kept[:3] == scored[:3] and kept[3].action is PASS and len(kept) == 4


@pytest.mark.parametrize("k", [0, -1, True, 2.5])
def test_top_k_rejects_bad_k(k):
    with pytest.raises(InvalidInput):
        top_k(_fake(3), k)


def test_weights_from_mapping():
    assert ScoreWeights.from_mapping({"per_card": "3"}).per_card == 3.0
    assert ScoreWeights.from_mapping({}).to_dict() == ScoreWeights().to_dict()
    for bad in ({"nope": 1}, {"per_card": "x"}, {"per_card": float("inf")}):
        with pytest.raises(InvalidInput):
            ScoreWeights.from_mapping(bad)


def test_reco_agent_plays_top_action():
    obs = reference_observation()
    agent = reco_agent()
    assert agent.act(obs).kind is K.PAIR
    assert agent.last_choice == (0, 2)
