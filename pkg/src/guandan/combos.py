"""Combination kinds, validation, the beats relation and legal-move enumeration.

Wildcards (the Hearts card of the level rank) may stand in for any
non-joker card.  A combination made only of wildcards is allowed only when
every wildcard stands for itself (a lone level card, or the two level-card
Hearts as a pair).

Combos produced here are canonical: every wildcard in ``cards`` appears in
``wild`` (identity included), and outside straight flushes the represented
suit is normalised to Hearts because it cannot affect the play.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import combinations_with_replacement
from operator import itemgetter
from enum import IntEnum
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .cards import Card, Rank, Suit, check_level, is_wildcard, sort_cards
from .errors import InvalidCombo, InvalidState, InvalidWild

__all__ = [
    "ComboKind",
    "Combo",
    "Pass",
    "PASS",
    "Action",
    "CATEGORY_TWO",
    "validate_combo",
    "beats",
    "enumerate_legal_actions",
    "action_sort_key",
]


class ComboKind(IntEnum):
    """Kinds in enumeration order."""

    SINGLE = 0
    PAIR = 1
    TRIPLE = 2
    THREE_PAIRS = 3
    TWO_TRIPLES = 4
    TRIPLE_WITH_PAIR = 5
    STRAIGHT = 6
    BOMB = 7
    STRAIGHT_FLUSH = 8
    JOKER_BOMB = 9

    @property
    def label(self) -> str:
        return _KIND_LABELS[self]

    @property
    def is_category_two(self) -> bool:
        return self >= ComboKind.BOMB

    @classmethod
    def from_label(cls, label: str) -> "ComboKind":
        try:
            return _LABEL_TO_KIND[label]
        except KeyError:
            raise InvalidCombo(f"unknown combo kind {label!r}") from None


_KIND_LABELS = [
    "Single",
    "Pair",
    "Triple",
    "ThreeConsecutivePairs",
    "TwoConsecutiveTriples",
    "TripleWithPair",
    "Straight",
    "Bomb",
    "StraightFlush",
    "JokerBomb",
]
_LABEL_TO_KIND = {label: ComboKind(i) for i, label in enumerate(_KIND_LABELS)}

CATEGORY_TWO = frozenset({ComboKind.BOMB, ComboKind.STRAIGHT_FLUSH, ComboKind.JOKER_BOMB})

# (kind, cards per rank, number of ranks) for the run kinds
_RUNS = {
    ComboKind.THREE_PAIRS: (2, 3),
    ComboKind.TWO_TRIPLES: (3, 2),
    ComboKind.STRAIGHT: (1, 5),
    ComboKind.STRAIGHT_FLUSH: (1, 5),
}


class Combo(NamedTuple):
    """A played combination.  A named tuple so that enumeration stays cheap."""

    kind: ComboKind
    cards: tuple[Card, ...]
    key_rank: Rank
    wild: tuple[tuple[Card, Rank, Suit], ...] = ()

    @property
    def size(self) -> int:
        return len(self.cards)

    @property
    def is_category_two(self) -> bool:
        return self.kind >= ComboKind.BOMB

    @property
    def wild_map(self) -> dict[Card, tuple[Rank, Suit]]:
        return {c: (r, s) for c, r, s in self.wild}

    @property
    def text(self) -> str:
        subs = {c: f"{c.text}→{s.letter}{r.symbol}" for c, r, s in self.wild}
        body = ",".join(subs.get(c, c.text) for c in self.cards)
        return f"{self.kind.label}[{self.key_rank.symbol}]: {body}"

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Combo({self.text!r})"


class Pass:
    """The pass action (singleton)."""

    _instance: "Pass | None" = None
    __slots__ = ()

    def __new__(cls) -> "Pass":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PASS"

    def __reduce__(self):
        return (Pass, ())

    text = "pass"


PASS = Pass()
Action = Union[Combo, Pass]


def action_sort_key(action: Action) -> tuple:
    if isinstance(action, Pass):
        return (99,)
    return (action.kind, action.key_rank, action.cards)


# --------------------------------------------------------------------------
# validation


def _same_rank(ranks: Sequence[int], kind: ComboKind, allow_joker: bool) -> Rank:
    first = ranks[0]
    if any(r != first for r in ranks):
        raise InvalidCombo(f"{kind.label} needs {len(ranks)} cards of one rank")
    if not allow_joker and first >= Rank.BLACK_JOKER:
        raise InvalidCombo(f"jokers cannot form a {kind.label}")
    return Rank(first)


def _run_key(ranks: Sequence[int], kind: ComboKind) -> Rank:
    per_rank, width = _RUNS[kind]
    counts = Counter(ranks)
    shape = f"{kind.label} needs {width} consecutive ranks with {per_rank} card(s) each"
    if len(counts) != width or any(n != per_rank for n in counts.values()):
        raise InvalidCombo(shape)
    if max(counts) >= Rank.BLACK_JOKER:
        raise InvalidCombo(f"jokers cannot appear in a {kind.label}")
    distinct = sorted(counts)
    if distinct[-1] - distinct[0] == width - 1:
        return Rank(distinct[-1])
    if distinct[-1] == Rank.ACE:
        # ace low: A-2-3-4-5 and the like, never wrapping past the ace
        low = [-1] + distinct[:-1]
        if low[-1] - low[0] == width - 1:
            return Rank(low[-1])
    raise InvalidCombo(shape)


def _shape_key(kind: ComboKind, eff: Sequence[tuple[int, Suit | None]]) -> Rank:
    ranks = [r for r, _ in eff]
    n = len(ranks)
    if kind is ComboKind.SINGLE:
        if n != 1:
            raise InvalidCombo("Single needs exactly 1 card")
        return Rank(ranks[0])
    if kind is ComboKind.PAIR:
        if n != 2:
            raise InvalidCombo("Pair needs exactly 2 cards of one rank")
        return _same_rank(ranks, kind, allow_joker=True)
    if kind is ComboKind.TRIPLE:
        if n != 3:
            raise InvalidCombo("Triple needs exactly 3 cards of one rank")
        return _same_rank(ranks, kind, allow_joker=False)
    if kind is ComboKind.BOMB:
        if not 4 <= n <= 8:
            raise InvalidCombo("Bomb needs 4 to 8 cards of one rank")
        return _same_rank(ranks, kind, allow_joker=False)
    if kind is ComboKind.JOKER_BOMB:
        if sorted(ranks) != [Rank.BLACK_JOKER] * 2 + [Rank.RED_JOKER] * 2:
            raise InvalidCombo("JokerBomb needs both black jokers and both red jokers")
        return Rank.RED_JOKER
    if kind is ComboKind.TRIPLE_WITH_PAIR:
        counts = Counter(ranks)
        if n != 5 or sorted(counts.values()) != [2, 3]:
            raise InvalidCombo("TripleWithPair needs 3 cards of one rank plus 2 of another")
        triple = next(r for r, k in counts.items() if k == 3)
        if triple >= Rank.BLACK_JOKER:
            raise InvalidCombo("jokers cannot form the triple of a TripleWithPair")
        return Rank(triple)
    if kind in _RUNS:
        if n != _RUNS[kind][0] * _RUNS[kind][1]:
            raise InvalidCombo(f"{kind.label} needs {_RUNS[kind][0] * _RUNS[kind][1]} cards")
        key = _run_key(ranks, kind)
        if kind is ComboKind.STRAIGHT_FLUSH and len({s for _, s in eff}) != 1:
            raise InvalidCombo("StraightFlush needs all five cards in one suit")
        return key
    raise InvalidCombo(f"unknown kind {kind!r}")


def validate_combo(
    cards: Iterable[Card],
    kind: ComboKind,
    wild: Mapping[Card, tuple[Rank, Suit]] | None,
    level: Rank,
) -> Combo:
    """Check that ``cards`` (after applying ``wild``) have the shape of ``kind``.

    Wildcards absent from ``wild`` stand for themselves.  Raises
    :class:`InvalidWild` for a bad assignment and :class:`InvalidCombo` for a
    shape mismatch; otherwise returns the canonical :class:`Combo`.
    """
    level = check_level(level)
    kind = ComboKind(kind)
    cards = sort_cards(cards)
    if not cards:
        raise InvalidCombo("a combination needs at least one card")
    if len(set(cards)) != len(cards):
        raise InvalidCombo("the same physical card appears twice")
    wild = dict(wild or {})
    for c, (r, s) in wild.items():
        if c not in cards:
            raise InvalidWild(f"{c.text} is assigned but not played")
        if not is_wildcard(c, level):
            raise InvalidWild(f"{c.text} is not the wildcard for level {level.symbol}")
        if Rank(r).is_joker:
            raise InvalidWild("a wildcard cannot represent a joker")
        if s is None:
            raise InvalidWild("a wildcard must represent a suited card")

    identity = (level, Suit.HEARTS)
    eff: list[tuple[int, Suit | None]] = []
    subs: list[tuple[Card, Rank, Suit]] = []
    for c in cards:
        if is_wildcard(c, level):
            r, s = wild.get(c, identity)
            r, s = Rank(r), Suit(s)
            eff.append((r, s))
            subs.append((c, r, s))
        else:
            eff.append((c.rank, c.suit))
    if len(subs) == len(cards) and any((r, s) != identity for _, r, s in subs):
        raise InvalidWild("wildcards can only substitute alongside at least one natural card")

    key = _shape_key(kind, eff)
    if kind is not ComboKind.STRAIGHT_FLUSH:
        subs = [(c, r, Suit.HEARTS) for c, r, _ in subs]
    return Combo(kind, cards, key, tuple(subs))


# --------------------------------------------------------------------------
# ordering


def _power(c: Combo) -> tuple[int, int, int]:
    """Category-two strength: bombs of <=5 < straight flush < bombs of >=6 < joker bomb."""
    if c.kind is ComboKind.JOKER_BOMB:
        return (3, 0, 0)
    if c.kind is ComboKind.STRAIGHT_FLUSH:
        return (1, 0, c.key_rank)
    return (0 if c.size <= 5 else 2, c.size, c.key_rank)


def beats(challenger: Combo, incumbent: Combo) -> bool:
    """True iff ``challenger`` may be played on top of ``incumbent``."""
    two_c = challenger.kind >= ComboKind.BOMB
    two_i = incumbent.kind >= ComboKind.BOMB
    if two_c and two_i:
        return _power(challenger) > _power(incumbent)
    if two_c != two_i:
        return two_c
    return (
        challenger.kind == incumbent.kind
        and challenger.size == incumbent.size
        and challenger.key_rank > incumbent.key_rank
    )


# --------------------------------------------------------------------------
# enumeration


class _HandIndex:
    """Hand split by rank and by (rank, suit), wildcards held apart."""

    __slots__ = ("level", "wilds", "n_wild", "by_rank", "by_rank_suit", "count", "suit_mask", "at_least")

    def __init__(self, hand: tuple[Card, ...], level: Rank) -> None:
        # ids are rank * 8 + suit * 2 + copy for natural cards; jokers are 104..107
        self.level = level
        wild_lo = level * 8 + Suit.HEARTS * 2
        self.wilds: list[Card] = []
        self.by_rank: list[list[Card]] = [[] for _ in range(15)]
        self.by_rank_suit: dict[tuple[int, int], list[Card]] = {}
        mask = [0, 0, 0, 0]
        by_rank, by_rank_suit = self.by_rank, self.by_rank_suit
        for c in hand:
            if wild_lo <= c <= wild_lo + 1:
                self.wilds.append(c)
                continue
            if c >= 104:
                by_rank[13 + ((c - 104) >> 1)].append(c)
                continue
            rank = c >> 3
            suit = (c >> 1) & 3
            by_rank[rank].append(c)
            pool = by_rank_suit.get((rank, suit))
            if pool is None:
                by_rank_suit[rank, suit] = [c]
                mask[suit] |= 1 << rank
            else:
                pool.append(c)
        self.n_wild = len(self.wilds)
        self.count = count = [len(cs) for cs in by_rank]
        self.suit_mask = mask
        # at_least[n]: bitmask of natural ranks held at least n times
        at_least = [0, 0, 0, 0]
        for r in range(13):
            for n in range(min(count[r], 3) + 1):
                at_least[n] |= 1 << r
        self.at_least = at_least

    def options(self, pool: list[Card], need: int, joker: bool = False) -> list[tuple[list[Card], int]]:
        """(naturals, wildcards needed) ways to supply ``need`` cards from ``pool``.

        Naturals are always the lowest cards of the pool; wildcards never
        stand in for jokers.
        """
        have = len(pool)
        if joker:
            return [(pool[:need], 0)] if have >= need else []
        return [(pool[:k], need - k) for k in range(min(need, have), max(0, need - self.n_wild) - 1, -1)]


_RANK_OF = tuple(Rank)
_HEARTS = Suit.HEARTS

# (key, ranks, bitmask) for every run of each width, ace-low first
_RUN_TABLE = {
    width: [
        (
            start + width - 1,
            ranks,
            sum(1 << r for r in ranks),
        )
        for start in range(-1, 14 - width)
        for ranks in [[int(Rank.ACE) if p == -1 else p for p in range(start, start + width)]]
    ]
    for width in (2, 3, 5)
}


def _emit_same_rank(idx: _HandIndex, kind: ComboKind, rank: int, need: int, out: list[Combo]) -> None:
    key = _RANK_OF[rank]
    pool = idx.by_rank[rank]
    have = len(pool)
    if have >= need:
        out.append(Combo(kind, tuple(pool[:need]), key, ()))
    nw = idx.n_wild
    if not nw or rank >= 13:
        return
    for k in range(min(need - 1, have), max(0, need - nw) - 1, -1):
        if not k and rank != idx.level:
            break
        used = idx.wilds[: need - k]
        out.append(Combo(kind, tuple(sorted(pool[:k] + used)), key, tuple((c, key, _HEARTS) for c in used)))


def _triple_with_pair(idx: _HandIndex, min_key: int, out: list[Combo]) -> None:
    nw = idx.n_wild
    wilds = idx.wilds
    kind = ComboKind.TRIPLE_WITH_PAIR
    by_rank = idx.by_rank
    # a pair made only of wildcards plays the same whatever rank it names,
    # so it appears once, naming the lowest rank other than the triple's
    pairs = [(r2, nat2, w2) for r2 in range(15) for nat2, w2 in idx.options(by_rank[r2], 2, r2 >= 13) if nat2]
    for r1 in range(max(0, min_key + 1), 13):
        triples = idx.options(by_rank[r1], 3)
        if not triples:
            continue
        key = _RANK_OF[r1]
        extra = [(1 if r1 == 0 else 0, [], 2)] if nw >= 2 else []
        for r2, nat2, w2 in pairs + extra:
            if r2 == r1:
                continue
            for nat1, w1 in triples:
                w = w1 + w2
                if w > nw:
                    continue
                if not w:
                    out.append(Combo(kind, tuple(nat1 + nat2 if r1 < r2 else nat2 + nat1), key, ()))
                    continue
                used = wilds[:w]
                reps = sorted([r1] * w1 + [r2] * w2)
                wild = tuple((c, _RANK_OF[r], _HEARTS) for c, r in zip(used, reps))
                out.append(Combo(kind, tuple(sorted(nat1 + nat2 + used)), key, wild))


def _run(
    idx: _HandIndex, kind: ComboKind, key: int, ranks: list[int], pools: list[list[Card]], per: int, rep_suit: Suit,
    out: list[Combo],
) -> None:
    """Every way to fill one run; ``pools[i]`` holds the naturals usable for ``ranks[i]``."""
    nw = idx.n_wild
    key_rank = _RANK_OF[key]
    if not nw:
        nat = []
        for pool in pools:
            nat += pool[:per]
        out.append(Combo(kind, tuple(sorted(nat)), key_rank, ()))
        return
    forced = [max(0, per - len(pool)) for pool in pools]
    spare = nw - sum(forced)
    if spare < 0:
        return
    n = len(pools)
    wilds = idx.wilds
    for extra in range(spare + 1):
        for picks in combinations_with_replacement(range(n), extra):
            wc = forced[:]
            for i in picks:
                wc[i] += 1
            if any(k > per for k in wc):
                continue
            nat = []
            reps = []
            for r, pool, k in zip(ranks, pools, wc):
                nat += pool[: per - k]
                reps += [r] * k
            w = len(reps)
            if not w:
                out.append(Combo(kind, tuple(sorted(nat)), key_rank, ()))
                continue
            if not nat:
                continue
            reps.sort()
            used = wilds[:w]
            wild = tuple((c, _RANK_OF[r], rep_suit) for c, r in zip(used, reps))
            out.append(Combo(kind, tuple(sorted(nat + used)), key_rank, wild))


def _gen_kind(idx: _HandIndex, kind: ComboKind, min_key: int) -> list[Combo]:
    """All canonical combos of ``kind`` with key_rank > ``min_key``, unordered.

    Run kinds prune with rank bitmasks before filling any slot.
    """
    count, nw = idx.count, idx.n_wild
    out: list[Combo] = []
    if kind <= ComboKind.TRIPLE:
        need = kind + 1
        top = 15 if kind is not ComboKind.TRIPLE else 13
        for r in range(max(0, min_key + 1), top):
            if count[r] or (r == idx.level and nw):
                _emit_same_rank(idx, kind, r, need, out)
    elif kind is ComboKind.BOMB:
        for r in range(max(0, min_key + 1), 13):
            if count[r] == 0:
                continue
            for n in range(4, min(8, count[r] + nw) + 1):
                _emit_same_rank(idx, kind, r, n, out)
    elif kind is ComboKind.JOKER_BOMB:
        if min_key < Rank.RED_JOKER and count[13] == 2 and count[14] == 2:
            out.append(Combo(kind, tuple(idx.by_rank[13] + idx.by_rank[14]), Rank.RED_JOKER, ()))
    elif kind is ComboKind.TRIPLE_WITH_PAIR:
        _triple_with_pair(idx, min_key, out)
    elif kind is ComboKind.STRAIGHT_FLUSH:
        for suit in Suit:
            present = idx.suit_mask[suit]
            if present.bit_count() + nw < 5:
                continue
            for key, ranks, mask in _RUN_TABLE[5]:
                if key > min_key and (mask & ~present).bit_count() <= nw:
                    pools = [idx.by_rank_suit.get((r, suit), []) for r in ranks]
                    _run(idx, kind, key, ranks, pools, 1, suit, out)
    else:
        per_rank, width = _RUNS[kind]
        full = idx.at_least[per_rank]
        some = idx.at_least[1]
        for key, ranks, mask in _RUN_TABLE[width]:
            if key <= min_key:
                continue
            if mask & ~full:
                if not nw or (mask & ~some) and (mask & ~some).bit_count() * per_rank > nw:
                    continue
                if sum(per_rank - count[r] for r in ranks if count[r] < per_rank) > nw:
                    continue
            _run(idx, kind, key, ranks, [idx.by_rank[r] for r in ranks], per_rank, _HEARTS, out)
    return out


# sort key within one kind: (key_rank, cards)
_KEY_AND_CARDS = itemgetter(2, 1)


class _Tables:
    """Lazily built per-kind combo lists for one hand."""

    __slots__ = ("idx", "kinds", "_two")

    def __init__(self, hand: tuple[Card, ...], level: Rank) -> None:
        self.idx = _HandIndex(hand, level)
        self.kinds: dict[ComboKind, tuple[Combo, ...]] = {}
        self._two: tuple[Combo, ...] | None = None

    def category_two(self) -> tuple[Combo, ...]:
        if self._two is None:
            self._two = tuple(c for kind in _CATEGORY_TWO_ORDER for c in self.get(kind))
        return self._two

    def get(self, kind: ComboKind) -> tuple[Combo, ...]:
        table = self.kinds.get(kind)
        if table is None:
            table = tuple(sorted(_gen_kind(self.idx, kind, -1), key=_KEY_AND_CARDS))
            self.kinds[kind] = table
        return table


@lru_cache(maxsize=1024)
def _tables(hand: tuple[Card, ...], level: Rank) -> _Tables:
    return _Tables(hand, level)


_CATEGORY_TWO_ORDER = (ComboKind.BOMB, ComboKind.STRAIGHT_FLUSH, ComboKind.JOKER_BOMB)


def enumerate_legal_actions(hand: Iterable[Card], incumbent: Combo | None, level: Rank) -> list[Action]:
    """Every distinct combo playable from ``hand`` (leading) or beating ``incumbent``.

    Combos that differ only in which physical copy or same-rank card is used
    are collapsed to one representative (the lowest cards).  Combos that use
    a different number of wildcards, or different natural ranks, stay
    distinct.  When following, :data:`PASS` is appended last.
    """
    if type(level) is not Rank or level >= Rank.BLACK_JOKER:
        level = check_level(level)
    hand = sort_cards(hand)
    if not hand:
        raise InvalidState("cannot enumerate actions for an empty hand")

    tables = _tables(hand, level)
    actions: list[Action] = []
    if incumbent is None:
        for kind in ComboKind:
            actions.extend(tables.get(kind))
        return actions
    if incumbent.kind < ComboKind.BOMB:
        key = incumbent.key_rank
        actions = [c for c in tables.get(incumbent.kind) if c.key_rank > key]
        actions.extend(tables.category_two())
    else:
        actions = [c for c in tables.category_two() if beats(c, incumbent)]
    actions.append(PASS)
    return actions
