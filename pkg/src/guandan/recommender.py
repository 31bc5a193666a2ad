"""Action scoring and top-k filtering.

The scorer is a hand-written heuristic behind a small interface so that a
learned model could replace it without touching callers.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping, Protocol, Sequence

from .agents import Observation
from .combos import Action, Combo, Pass
from .engine import team_of
from .errors import InvalidInput

__all__ = [
    "ScoreWeights",
    "ScoredAction",
    "Scorer",
    "HeuristicScorer",
    "heuristic_score",
    "score_actions",
    "top_k",
    "RecommenderAgent",
    "reco_agent",
    "DEFAULT_K",
]

DEFAULT_K = 5


@dataclass(frozen=True)
class ScoreWeights:
    """Named constants of the heuristic; any of them can be overridden from config."""

    per_card: float = 2.0
    per_rank_step: float = -0.1
    category_two: float = -5.0
    empties_hand: float = 6.0
    opponent_incumbent: float = 1.5
    pass_score: float = -1.0

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ScoreWeights":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidInput(f"unknown recommender weight(s): {', '.join(sorted(unknown))}")
        parsed = {}
        for name, value in values.items():
            try:
                parsed[name] = float(value)
            except (TypeError, ValueError):
                raise InvalidInput(f"weight {name} must be a number, got {value!r}") from None
            if not math.isfinite(parsed[name]):
                raise InvalidInput(f"weight {name} must be finite")
        return cls(**parsed)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class ScoredAction:
    action: Action
    score: float


class Scorer(Protocol):
    def score(self, observation: Observation, action: Action) -> float: ...


class HeuristicScorer:
    """Prefers shedding many low cards, keeps bombs back, and jumps at going out."""

    def __init__(self, weights: ScoreWeights | None = None) -> None:
        self.weights = weights or ScoreWeights()

    def score(self, observation: Observation, action: Action) -> float:
        w = self.weights
        if isinstance(action, Pass):
            return w.pass_score
        value = w.per_card * len(action.cards) + w.per_rank_step * int(action.key_rank)
        if action.is_category_two:
            value += w.category_two
        if len(action.cards) == len(observation.hand):
            value += w.empties_hand
        last = observation.last_play
        if last is not None and team_of(last[0]) != team_of(observation.seat):
            value += w.opponent_incumbent
        return value


_DEFAULT_SCORER = HeuristicScorer()


def heuristic_score(observation: Observation, action: Action, weights: ScoreWeights | None = None) -> float:
    scorer = _DEFAULT_SCORER if weights is None else HeuristicScorer(weights)
    return scorer.score(observation, action)


def score_actions(observation: Observation, scorer: Scorer | None = None) -> list[ScoredAction]:
    """Score every legal action; highest first, ties kept in enumeration order."""
    scorer = scorer or _DEFAULT_SCORER
    scored = [ScoredAction(a, float(scorer.score(observation, a))) for a in observation.legal_actions]
    for s in scored:
        if not math.isfinite(s.score):
            raise InvalidInput(f"scorer returned a non-finite score for {getattr(s.action, 'text', s.action)!r}")
    return sorted(scored, key=lambda s: -s.score)


def top_k(scored: Sequence[ScoredAction], k: int = DEFAULT_K) -> list[ScoredAction]:
    """The first ``k`` entries of ``scored``.

    When Pass is among the scored actions (the seat is following) but falls
    outside the cut, it is appended so the planner can always decline.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidInput(f"k must be a positive integer, got {k!r}")
    kept = list(scored[:k])
    if not any(isinstance(s.action, Pass) for s in kept):
        kept.extend(s for s in scored[k:] if isinstance(s.action, Pass))
    return kept


class RecommenderAgent:
    """Plays the recommender's top-scored action."""

    def __init__(self, scorer: Scorer | None = None) -> None:
        self.scorer = scorer or _DEFAULT_SCORER
        self.last_choice: tuple[int, int] | None = None

    def act(self, observation: Observation) -> Action:
        best = score_actions(observation, self.scorer)[0].action
        legal = observation.legal_actions
        self.last_choice = (legal.index(best), len(legal))
        return best


def reco_agent(weights: ScoreWeights | None = None) -> RecommenderAgent:
    return RecommenderAgent(HeuristicScorer(weights))


def describe(scored: Sequence[ScoredAction]) -> list[str]:
    """One ``score  action`` line per entry, for logs and demos."""
    out = []
    for s in scored:
        text = s.action.text if isinstance(s.action, Combo) else "pass"
        out.append(f"{s.score:7.2f}  {text}")
    return out
