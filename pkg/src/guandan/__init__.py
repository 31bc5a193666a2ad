"""Guandan card-game engine, baseline agents, an action recommender and
language-model agents that reason about hidden hands before they play."""

from __future__ import annotations

from .agents import Observation, best_p_low_v_agent, random_agent
from .cards import Card, Rank, Suit, build_deck, deal, parse_card
from .combos import PASS, Combo, ComboKind, Pass, beats, enumerate_legal_actions, validate_combo
from .engine import DealState, MatchConfig, new_deal, replay_deal, run_deal, run_match
from .errors import (
    BackendError,
    GuandanError,
    IllegalAction,
    InvalidCombo,
    InvalidInput,
    InvalidState,
    InvalidWild,
)
from .harness import AgentSpec, collect_action_stats, run_position_swap, run_seeded_series
from .interpreter import render_history, render_observation, render_rules
from .recommender import ScoreWeights, reco_agent, score_actions, top_k
from .tom import HttpBackend, MockBackend, TomAgent, parse_action_choice, tom_agent

__version__ = "0.1.0"

__all__ = [
    "Observation", "best_p_low_v_agent", "random_agent",
    "Card", "Rank", "Suit", "build_deck", "deal", "parse_card",
    "PASS", "Combo", "ComboKind", "Pass", "beats", "enumerate_legal_actions", "validate_combo",
    "DealState", "MatchConfig", "new_deal", "replay_deal", "run_deal", "run_match",
    "BackendError", "GuandanError", "IllegalAction", "InvalidCombo", "InvalidInput", "InvalidState", "InvalidWild",
    "AgentSpec", "collect_action_stats", "run_position_swap", "run_seeded_series",
    "render_history", "render_observation", "render_rules",
    "ScoreWeights", "reco_agent", "score_actions", "top_k",
    "HttpBackend", "MockBackend", "TomAgent", "parse_action_choice", "tom_agent",
    "__version__",
]
