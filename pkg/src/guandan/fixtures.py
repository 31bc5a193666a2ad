"""A fixed mid-trick reference position used by tests, demos and ``render-prompt``.

Seat 0 is the observer.  Its teammate (seat 2) has just played a pair of
nines; the next opponent (seat 1) is down to two cards.  With Jacks as the
level, the only plays are the pair of Club aces or passing.
"""

from __future__ import annotations

from .agents import Observation
from .cards import Rank, parse_card
from .combos import PASS, ComboKind, enumerate_legal_actions, validate_combo
from .engine import HistoryEvent

__all__ = ["REFERENCE_HAND", "REFERENCE_LEVEL", "reference_history", "reference_observation"]

REFERENCE_LEVEL = Rank.JACK
REFERENCE_HAND = tuple(
    sorted(
        parse_card(t)
        for t in (
            "D 2", "D 4", "C 3", "C 4", "C A#0", "C A#1", "H K",
            "H A", "S 2", "S 3", "S 4", "S 8", "S J",
        )
    )
)


def _play(kind: ComboKind, *texts: str):
    return validate_combo([parse_card(t) for t in texts], kind, None, REFERENCE_LEVEL)


def reference_history() -> tuple[HistoryEvent, ...]:
    """The eight events leading up to the reference position (observer's own passes omitted)."""
    return (
        HistoryEvent(2, _play(ComboKind.SINGLE, "BJ#0"), 12),
        HistoryEvent(3, PASS, 13),
        HistoryEvent(1, PASS, 4),
        HistoryEvent(2, _play(ComboKind.PAIR, "D 4", "H 4"), 10),
        HistoryEvent(3, PASS, 13),
        HistoryEvent(1, _play(ComboKind.PAIR, "C 8", "H 8"), 2),
        HistoryEvent(2, _play(ComboKind.PAIR, "D 9", "H 9"), 8),
        HistoryEvent(3, PASS, 13),
    )


def reference_observation() -> Observation:
    history = reference_history()
    incumbent = history[6].action
    return Observation(
        seat=0,
        hand=REFERENCE_HAND,
        level=REFERENCE_LEVEL,
        teammate_count=8,
        next_opponent_count=2,
        previous_opponent_count=13,
        has_lead=False,
        last_play=(2, incumbent),
        legal_actions=tuple(enumerate_legal_actions(REFERENCE_HAND, incumbent, REFERENCE_LEVEL)),
        history=history,
        deal_index=0,
        step=len(history),
    )
