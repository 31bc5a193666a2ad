"""Agent interface, the per-seat observation, and the two rule-based baselines."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol, Sequence

from .cards import Card, Rank
from .combos import PASS, Action, Combo, ComboKind

if TYPE_CHECKING:
    from .engine import DealState, HistoryEvent

__all__ = [
    "Observation",
    "Agent",
    "observe",
    "RandomAgent",
    "BestPLowVAgent",
    "random_agent",
    "best_p_low_v_agent",
    "LEAD_PRIORITY",
    "BOMB_THRESHOLD",
]


@dataclass(frozen=True)
class Observation:
    """What one seat may see.  Other seats' cards are never included."""

    seat: int
    hand: tuple[Card, ...]
    level: Rank
    teammate_count: int
    next_opponent_count: int
    previous_opponent_count: int
    has_lead: bool
    last_play: tuple[int, Combo] | None
    legal_actions: tuple[Action, ...]
    history: tuple["HistoryEvent", ...]
    deal_index: int = 0
    step: int = 0

    @property
    def is_following(self) -> bool:
        return not self.has_lead


class Agent(Protocol):
    def act(self, observation: Observation) -> Action: ...


def observe(state: "DealState", legal: Sequence[Action], deal_index: int = 0, step: int = 0) -> Observation:
    seat = state.current_seat
    sizes = state.hand_sizes
    return Observation(
        seat=seat,
        hand=state.hands[seat],
        level=state.level,
        teammate_count=sizes[(seat + 2) % 4],
        next_opponent_count=sizes[(seat + 1) % 4],
        previous_opponent_count=sizes[(seat + 3) % 4],
        has_lead=state.incumbent is None,
        last_play=state.incumbent,
        legal_actions=tuple(legal),
        history=state.history,
        deal_index=deal_index,
        step=step,
    )


class RandomAgent:
    """Uniform choice over the legal actions from a private seeded stream."""

    def __init__(self, seed: int | None = None) -> None:
        self.rng = random.Random(seed)
        self.last_choice: tuple[int, int] | None = None

    def act(self, observation: Observation) -> Action:
        legal = observation.legal_actions
        i = self.rng.randrange(len(legal))
        self.last_choice = (i, len(legal))
        return legal[i]


# Leading preference, highest first.  Sheds the most cards per trick while
# keeping bombs back.
LEAD_PRIORITY: tuple[ComboKind, ...] = (
    ComboKind.TRIPLE_WITH_PAIR,
    ComboKind.TWO_TRIPLES,
    ComboKind.THREE_PAIRS,
    ComboKind.STRAIGHT,
    ComboKind.TRIPLE,
    ComboKind.PAIR,
    ComboKind.SINGLE,
    ComboKind.STRAIGHT_FLUSH,
    ComboKind.BOMB,
    ComboKind.JOKER_BOMB,
)

# Bombs are only spent when both opponents are this close to going out.
BOMB_THRESHOLD = 5


def _bomb_strength(c: Combo) -> tuple[int, int, int]:
    if c.kind is ComboKind.JOKER_BOMB:
        return (3, 0, 0)
    if c.kind is ComboKind.STRAIGHT_FLUSH:
        return (1, 0, c.key_rank)
    return (0 if c.size <= 5 else 2, c.size, c.key_rank)


class BestPLowVAgent:
    """Best priority, lowest value.

    Leading: the lowest combo of the most preferred kind available.
    Following: the lowest same-kind beat; bombs only against opponents
    about to go out; otherwise pass.
    """

    def __init__(self, priority: Sequence[ComboKind] = LEAD_PRIORITY, bomb_threshold: int = BOMB_THRESHOLD) -> None:
        self.rank_of_kind = {k: i for i, k in enumerate(priority)}
        self.bomb_threshold = bomb_threshold
        self.last_choice: tuple[int, int] | None = None

    def act(self, observation: Observation) -> Action:
        legal = observation.legal_actions
        choice = self._choose(observation, legal)
        self.last_choice = (legal.index(choice), len(legal))
        return choice

    def _choose(self, obs: Observation, legal: Sequence[Action]) -> Action:
        plays = [a for a in legal if isinstance(a, Combo)]
        if obs.has_lead:
            best = min(self.rank_of_kind[a.kind] for a in plays)
            pool = [a for a in plays if self.rank_of_kind[a.kind] == best]
            low = min(a.key_rank for a in pool)
            return next(a for a in pool if a.key_rank == low)

        regular = [a for a in plays if not a.is_category_two]
        if regular:
            low = min(a.key_rank for a in regular)
            return next(a for a in regular if a.key_rank == low)
        bombs = [a for a in plays if a.is_category_two]
        close = max(obs.next_opponent_count, obs.previous_opponent_count) <= self.bomb_threshold
        if bombs and close:
            weakest = min(_bomb_strength(a) for a in bombs)
            return next(a for a in bombs if _bomb_strength(a) == weakest)
        return PASS


def random_agent(seed: int | None = None) -> RandomAgent:
    return RandomAgent(seed)


def best_p_low_v_agent() -> BestPLowVAgent:
    return BestPLowVAgent()
