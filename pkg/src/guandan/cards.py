"""Cards, ranks, suits, the 108-card deck and dealing.

Every physical card is interned: ``CARDS[i]`` is the only instance with id
``i``, so equality and hashing reduce to integer comparisons.  Card ids
follow the canonical ordering used everywhere in the package: rank first
(2 lowest, Red Joker highest), then suit (Diamonds, Clubs, Hearts, Spades),
then deck copy.
"""

from __future__ import annotations

import random
from enum import IntEnum
from typing import Iterable, Sequence

from .errors import InvalidInput

__all__ = [
    "Rank",
    "Suit",
    "Card",
    "CARDS",
    "NATURAL_RANKS",
    "build_deck",
    "deal",
    "is_wildcard",
    "check_level",
    "parse_card",
    "sort_cards",
    "display_order",
]


class Rank(IntEnum):
    TWO = 0
    THREE = 1
    FOUR = 2
    FIVE = 3
    SIX = 4
    SEVEN = 5
    EIGHT = 6
    NINE = 7
    TEN = 8
    JACK = 9
    QUEEN = 10
    KING = 11
    ACE = 12
    BLACK_JOKER = 13
    RED_JOKER = 14

    @property
    def is_joker(self) -> bool:
        return self >= Rank.BLACK_JOKER

    @property
    def symbol(self) -> str:
        return _RANK_SYMBOLS[self]

    @classmethod
    def from_symbol(cls, text: str) -> "Rank":
        try:
            return _SYMBOL_TO_RANK[text.strip().upper()]
        except KeyError:
            raise InvalidInput(f"unknown rank symbol {text!r}") from None


_RANK_SYMBOLS = ["2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K", "A", "BJ", "RJ"]
_SYMBOL_TO_RANK = {s: Rank(i) for i, s in enumerate(_RANK_SYMBOLS)}

NATURAL_RANKS: tuple[Rank, ...] = tuple(Rank(i) for i in range(13))


class Suit(IntEnum):
    """The four suits; the value is the tie-break order inside a rank."""

    DIAMONDS = 0
    CLUBS = 1
    HEARTS = 2
    SPADES = 3

    @property
    def letter(self) -> str:
        return "DCHS"[self]

    @classmethod
    def from_letter(cls, letter: str) -> "Suit":
        idx = "DCHS".find(letter.strip().upper())
        if idx < 0 or len(letter.strip()) != 1:
            raise InvalidInput(f"unknown suit letter {letter!r}")
        return cls(idx)


class Card(int):
    """One physical card.  Use :data:`CARDS` or :func:`parse_card`, never the constructor.

    A card is an ``int`` equal to its id, so hashing, equality and sorting
    run at C speed; ``rank``, ``suit``, ``copy`` and ``text`` are attributes.
    """

    def __new__(cls, card_id: int, rank: Rank, suit: Suit | None, copy: int) -> "Card":
        self = super().__new__(cls, card_id)
        self.id = card_id
        self.rank = rank
        self.suit = suit
        self.copy = copy
        if suit is None:
            self.text = f"{rank.symbol}#{copy}"
        else:
            self.text = f"{suit.letter} {rank.symbol}#{copy}"
        return self

    @property
    def is_joker(self) -> bool:
        return self.suit is None

    def __repr__(self) -> str:
        return f"Card({self.text!r})"

    def __str__(self) -> str:
        return self.text

    def __reduce__(self):
        return (_card_by_id, (self.id,))


def _card_by_id(card_id: int) -> Card:
    return CARDS[card_id]


def _make_cards() -> tuple[Card, ...]:
    cards: list[Card] = []
    for rank in NATURAL_RANKS:
        for suit in Suit:
            for copy in (0, 1):
                cards.append(Card(len(cards), rank, suit, copy))
    for rank in (Rank.BLACK_JOKER, Rank.RED_JOKER):
        for copy in (0, 1):
            cards.append(Card(len(cards), rank, None, copy))
    return tuple(cards)


CARDS: tuple[Card, ...] = _make_cards()
_BY_TEXT = {c.text: c for c in CARDS}


def card(rank: Rank, suit: Suit | None, copy: int = 0) -> Card:
    """Look up the interned card with the given identity."""
    if suit is None:
        if not rank.is_joker:
            raise InvalidInput(f"{rank.name} needs a suit")
        return CARDS[104 + (rank - Rank.BLACK_JOKER) * 2 + copy]
    if rank.is_joker:
        raise InvalidInput("jokers carry no suit")
    if copy not in (0, 1):
        raise InvalidInput(f"deck copy must be 0 or 1, got {copy}")
    return CARDS[rank * 8 + suit * 2 + copy]


def parse_card(text: str) -> Card:
    """Inverse of ``Card.text`` (``"H J#1"``, ``"BJ#0"``).

    The ``#copy`` suffix may be omitted, in which case copy 0 is assumed.
    """
    raw = text.strip()
    if "#" not in raw:
        raw += "#0"
    try:
        return _BY_TEXT[raw]
    except KeyError:
        raise InvalidInput(f"cannot parse card {text!r}") from None


def sort_cards(cards: Iterable[Card]) -> tuple[Card, ...]:
    return tuple(sorted(cards))


def display_order(cards: Iterable[Card]) -> list[Card]:
    """Suit-major order (Diamonds, Clubs, Hearts, Spades, then jokers) used when showing a hand."""
    return sorted(cards, key=lambda c: (4 if c.suit is None else c.suit, c.rank, c.copy))


def build_deck() -> list[Card]:
    """Return the 108 physical cards in canonical order."""
    return list(CARDS)


def deal(deck: Sequence[Card], seed: int) -> list[tuple[Card, ...]]:
    """Shuffle ``deck`` with a seeded Fisher-Yates pass and deal round-robin.

    Seat ``i`` receives the shuffled positions congruent to ``i`` mod 4.
    """
    if len(deck) != 108:
        raise InvalidInput(f"deck must hold 108 cards, got {len(deck)}")
    order = list(deck)
    random.Random(seed).shuffle(order)
    return [sort_cards(order[seat::4]) for seat in range(4)]


def check_level(level: Rank) -> Rank:
    level = Rank(level)
    if level.is_joker:
        raise InvalidInput("the level rank cannot be a joker")
    return level


def is_wildcard(c: Card, level: Rank) -> bool:
    """True for the Hearts card of the level rank."""
    return c.suit is Suit.HEARTS and c.rank == level
