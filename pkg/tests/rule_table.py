"""Table of combination rules shared by the unit tests and the acceptance run.

Card notation is compact: ``"C4"`` is club four copy 0, ``"H4'"`` copy 1,
``"BJ"``/``"RJ"`` are jokers (``'`` again for copy 1).  Wild assignments map
a card token to a target such as ``"S7"``.
"""

from __future__ import annotations

from guandan.cards import Rank, Suit, parse_card
from guandan.combos import ComboKind as K, validate_combo
from guandan.errors import InvalidCombo, InvalidWild


def tok(t: str):
    copy = 1 if t.endswith("'") else 0
    t = t.rstrip("'")
    if t in ("BJ", "RJ"):
        return parse_card(f"{t}#{copy}")
    return parse_card(f"{t[0]} {t[1:]}#{copy}")


def target(t: str):
    return Rank.from_symbol(t[1:]), Suit.from_letter(t[0])


def make(kind, text: str, level=Rank.TWO, wild: dict | None = None):
    cards = [tok(t) for t in text.split()]
    w = {tok(k): target(v) for k, v in (wild or {}).items()}
    return validate_combo(cards, kind, w, level)


R = Rank
# (name, kind, cards, level, wild, expected key rank or exception class)
VALIDITY = [
    ("single", K.SINGLE, "D7", R.TWO, None, R.SEVEN),
    ("single joker", K.SINGLE, "RJ", R.TWO, None, R.RED_JOKER),
    ("pair", K.PAIR, "D9 H9", R.TWO, None, R.NINE),
    ("pair of jokers", K.PAIR, "BJ BJ'", R.TWO, None, R.BLACK_JOKER),
    ("mixed jokers are no pair", K.PAIR, "BJ RJ", R.TWO, None, InvalidCombo),
    ("pair needs equal ranks", K.PAIR, "D9 H8", R.TWO, None, InvalidCombo),
    ("triple", K.TRIPLE, "DQ CQ SQ", R.TWO, None, R.QUEEN),
    ("three pairs 223344", K.THREE_PAIRS, "D2 C2 D3 C3 D4 C4", R.FIVE, None, R.FOUR),
    ("three pairs QQKKAA", K.THREE_PAIRS, "DQ CQ DK CK DA CA", R.FIVE, None, R.ACE),
    ("three pairs ace low AA2233", K.THREE_PAIRS, "DA CA D2 C2 D3 C3", R.FIVE, None, R.THREE),
    ("three pairs must be consecutive", K.THREE_PAIRS, "D2 C2 D3 C3 D5 C5", R.FIVE, None, InvalidCombo),
    ("three pairs never wrap", K.THREE_PAIRS, "DK CK DA CA D2 C2", R.FIVE, None, InvalidCombo),
    ("two triples 333444", K.TWO_TRIPLES, "D3 C3 S3 D4 C4 S4", R.TWO, None, R.FOUR),
    ("two triples ace low AAA222", K.TWO_TRIPLES, "DA CA SA D2 C2 S2", R.FIVE, None, R.TWO),
    ("two triples must be consecutive", K.TWO_TRIPLES, "D3 C3 S3 D5 C5 S5", R.TWO, None, InvalidCombo),
    ("triple with pair 55522", K.TRIPLE_WITH_PAIR, "D5 C5 S5 D2 C2", R.TEN, None, R.FIVE),
    ("triple with pair, pair of jokers", K.TRIPLE_WITH_PAIR, "D5 C5 S5 BJ BJ'", R.TEN, None, R.FIVE),
    ("triple with pair needs another rank", K.TRIPLE_WITH_PAIR, "D5 C5 S5 H5 D5'", R.TEN, None, InvalidCombo),
    ("straight 23456", K.STRAIGHT, "D2 C3 S4 H5 D6", R.TEN, None, R.SIX),
    ("straight A2345", K.STRAIGHT, "DA C2 S3 H4 D5", R.TEN, None, R.FIVE),
    ("straight 10JQKA", K.STRAIGHT, "D10 CJ SQ HK DA", R.TWO, None, R.ACE),
    ("straight never wraps", K.STRAIGHT, "DQ CK SA H2 D3", R.TEN, None, InvalidCombo),
    ("straight is exactly five", K.STRAIGHT, "D2 C3 S4 H5 D6 C7", R.TEN, None, InvalidCombo),
    ("straight flush", K.STRAIGHT_FLUSH, "S9 S10 SJ SQ SK", R.TWO, None, R.KING),
    ("straight flush needs one suit", K.STRAIGHT_FLUSH, "S9 S10 SJ SQ HK", R.TWO, None, InvalidCombo),
    ("bomb of four", K.BOMB, "D8 C8 H8 S8", R.TWO, None, R.EIGHT),
    ("bomb of eight", K.BOMB, "D8 C8 H8 S8 D8' C8' H8' S8'", R.TWO, None, R.EIGHT),
    ("three cards are no bomb", K.BOMB, "D8 C8 H8", R.TWO, None, InvalidCombo),
    ("joker bomb", K.JOKER_BOMB, "BJ BJ' RJ RJ'", R.TWO, None, R.RED_JOKER),
    ("joker bomb needs all four", K.JOKER_BOMB, "BJ BJ' RJ D2", R.TWO, None, InvalidCombo),
    ("wild fills a pair", K.PAIR, "D9 H5", R.FIVE, {"H5": "H9"}, R.NINE),
    ("wild fills a straight gap", K.STRAIGHT, "D2 C3 H5 H5' D6", R.FIVE, {"H5": "H4", "H5'": "H5"}, R.SIX),
    ("wild completes a bomb", K.BOMB, "D8 C8 S8 H5", R.FIVE, {"H5": "H8"}, R.EIGHT),
    ("wild joins a straight flush", K.STRAIGHT_FLUSH, "S9 S10 H5 SQ SK", R.FIVE, {"H5": "SJ"}, R.KING),
    ("lone wild counts as the level", K.SINGLE, "H5", R.FIVE, None, R.FIVE),
    ("two wilds as the level pair", K.PAIR, "H5 H5'", R.FIVE, None, R.FIVE),
    ("wild alone may not pose as another card", K.SINGLE, "H5", R.FIVE, {"H5": "HA"}, InvalidWild),
    ("wild-only pair may not change rank", K.PAIR, "H5 H5'", R.FIVE, {"H5": "HA", "H5'": "HA"}, InvalidWild),
    ("wild cannot be a joker", K.PAIR, "BJ H5", R.FIVE, {"H5": "HBJ"}, InvalidWild),
    ("only the level heart is wild", K.PAIR, "D9 S5", R.FIVE, {"S5": "H9"}, InvalidWild),
]

_SF = ("S9 S10 SJ SQ SK", K.STRAIGHT_FLUSH)
# (name, challenger, incumbent, expected); each side is (cards, kind)
BEATS = [
    ("joker bomb over 8-card bomb", ("BJ BJ' RJ RJ'", K.JOKER_BOMB), ("D8 C8 H8 S8 D8' C8' H8' S8'", K.BOMB), True),
    ("8-card bomb under joker bomb", ("D8 C8 H8 S8 D8' C8' H8' S8'", K.BOMB), ("BJ BJ' RJ RJ'", K.JOKER_BOMB), False),
    ("straight flush over 5-card bomb", _SF, ("DA CA HA SA DA'", K.BOMB), True),
    ("straight flush over 4-card bomb", _SF, ("DA CA HA SA", K.BOMB), True),
    ("straight flush under 6-card bomb", _SF, ("D3 C3 H3 S3 D3' C3'", K.BOMB), False),
    ("6-card bomb over straight flush", ("D3 C3 H3 S3 D3' C3'", K.BOMB), _SF, True),
    ("5-card bomb under straight flush", ("DA CA HA SA DA'", K.BOMB), _SF, False),
    ("higher straight flush", ("D10 DJ DQ DK DA", K.STRAIGHT_FLUSH), _SF, True),
    ("more cards beats higher rank", ("D3 C3 H3 S3 D3'", K.BOMB), ("DA CA HA SA", K.BOMB), True),
    ("same size higher rank", ("DA CA HA SA", K.BOMB), ("D3 C3 H3 S3", K.BOMB), True),
    ("bomb over any regular play", ("D3 C3 H3 S3", K.BOMB), ("D10 CJ SQ HK DA", K.STRAIGHT), True),
    ("triple with pair compares triple only", ("D6 C6 S6 D2 C2", K.TRIPLE_WITH_PAIR), ("D5 C5 S5 DA CA", K.TRIPLE_WITH_PAIR), True),
    ("lower triple loses despite higher pair", ("D5 C5 S5 DA CA", K.TRIPLE_WITH_PAIR), ("D6 C6 S6 D2 C2", K.TRIPLE_WITH_PAIR), False),
    ("equal triple does not beat", ("D6 C6 S6 DA CA", K.TRIPLE_WITH_PAIR), ("D6' C6' S6' D2 C2", K.TRIPLE_WITH_PAIR), False),
    ("different kind cannot beat", ("D9 C9 S9", K.TRIPLE), ("D3 C3", K.PAIR), False),
    ("higher pair", ("D9 C9", K.PAIR), ("D3 C3", K.PAIR), True),
    ("red joker over black joker", ("RJ", K.SINGLE), ("BJ", K.SINGLE), True),
    ("black joker over ace", ("BJ", K.SINGLE), ("SA", K.SINGLE), True),
    ("A2345 is the lowest straight", ("D2 C3 S4 H5 D6", K.STRAIGHT), ("DA C2 S3 H4 D5", K.STRAIGHT), True),
]


def run_validity(row):
    name, kind, text, level, wild, expected = row
    if isinstance(expected, type):
        try:
            make(kind, text, level, wild)
        except expected:
            return True
        return False
    return make(kind, text, level, wild).key_rank == expected


def run_beats(row):
    from guandan.combos import beats

    name, (a, ka), (b, kb), expected = row
    return beats(make(ka, a), make(kb, b)) is expected
