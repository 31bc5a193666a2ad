"""Deterministic text rendering of positions, play history, rules and action lists.

Wording lives in template files under ``templates/<locale>/``; this module
only fills them.  A template file is split into named sections by lines of
the form ``[name]`` and uses ``{{placeholder}}`` tokens.  Pass a directory to
:class:`TemplateStore` to swap the wording without touching code.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .agents import Observation
from .cards import Card, Rank, Suit, card, display_order
from .combos import Action, Combo, ComboKind, Pass
from .engine import HistoryEvent, teammate
from .errors import InvalidInput

__all__ = [
    "LOCALES",
    "DEFAULT_LOCALE",
    "TEMPLATE_NAMES",
    "TemplateStore",
    "RenderedObservation",
    "RenderedHistory",
    "RuleText",
    "render_observation",
    "render_history",
    "render_rules",
    "render_action_lines",
    "raw_state_json",
    "card_name",
    "role_of",
    "fill",
]

LOCALES = ("zh", "en")
DEFAULT_LOCALE = "zh"
TEMPLATE_NAMES = ("rules", "observation", "history", "plan", "belief", "second_order")

_TOKEN = re.compile(r"\{\{(\w+)\}\}")
_SECTION = re.compile(r"^\[(\w+)\]$")


def fill(template: str, values: Mapping[str, object]) -> str:
    """Replace every ``{{name}}`` token; a token without a value is an error."""

    def sub(m: re.Match) -> str:
        name = m.group(1)
        if name not in values:
            raise InvalidInput(f"template placeholder {{{{{name}}}}} has no value")
        return str(values[name])

    return _TOKEN.sub(sub, template)


def parse_sections(text: str) -> dict[str, str]:
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for line in text.splitlines():
        m = _SECTION.match(line.strip())
        if m:
            current = sections.setdefault(m.group(1), [])
            continue
        if current is None:
            if line.strip():
                raise InvalidInput("template text found before the first [section] header")
            continue
        current.append(line)
    return {name: "\n".join(lines).rstrip("\n") for name, lines in sections.items()}


class TemplateStore:
    """Templates and vocabulary for one locale, read once and then read-only."""

    def __init__(self, locale: str = DEFAULT_LOCALE, directory: str | Path | None = None) -> None:
        if locale not in LOCALES:
            raise InvalidInput(f"unknown locale {locale!r}; expected one of {', '.join(LOCALES)}")
        self.locale = locale
        self.sections: dict[str, dict[str, str]] = {}
        for name in TEMPLATE_NAMES:
            self.sections[name] = parse_sections(self._read(directory, f"{name}.txt"))
        self.terms = json.loads(self._read(directory, "terms.json"))

    def _read(self, directory: str | Path | None, filename: str) -> str:
        if directory is not None:
            path = Path(directory) / self.locale / filename
            if not path.is_file():
                raise InvalidInput(f"missing template file {path}")
            return path.read_text(encoding="utf-8")
        return (resources.files("guandan") / "templates" / self.locale / filename).read_text(encoding="utf-8")

    def section(self, template: str, name: str = "main") -> str:
        try:
            return self.sections[template][name]
        except KeyError:
            raise InvalidInput(f"template {self.locale}/{template} has no [{name}] section") from None

    def render(self, template: str, name: str = "main", **values: object) -> str:
        return fill(self.section(template, name), values)

    def kind_name(self, kind: ComboKind | str) -> str:
        label = kind if isinstance(kind, str) else kind.label
        return self.terms["kinds"][label]

    def role_name(self, role: str) -> str:
        return self.terms["roles"][role]


@lru_cache(maxsize=None)
def _packaged_store(locale: str) -> TemplateStore:
    return TemplateStore(locale)


def get_store(locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None) -> TemplateStore:
    if store is not None:
        if store.locale != locale:
            raise InvalidInput(f"template store is for {store.locale!r}, not {locale!r}")
        return store
    if locale not in LOCALES:
        raise InvalidInput(f"unknown locale {locale!r}; expected one of {', '.join(LOCALES)}")
    return _packaged_store(locale)


# --------------------------------------------------------------------------
# vocabulary


def card_name(c: Card, store: TemplateStore) -> str:
    if c.suit is None:
        return store.terms["jokers"][c.rank.symbol]
    return f"{store.terms['suits'][c.suit.letter]} {c.rank.symbol}"


def _target_name(rank: Rank, suit: Suit, store: TemplateStore) -> str:
    return card_name(card(rank, suit), store)


def combo_cards_text(combo: Combo, store: TemplateStore) -> str:
    """Card names in display order; wildcards show what they stand for."""
    subs = {c: (r, s) for c, r, s in combo.wild}
    names = []
    for c in display_order(combo.cards):
        name = card_name(c, store)
        if c in subs:
            r, s = subs[c]
            if (r, s) != (c.rank, c.suit):
                name = fill(store.terms["wild_as"], {"card": name, "target": _target_name(r, s, store)})
        names.append(name)
    return store.terms["separator"].join(names)


def role_of(observer: int, seat: int) -> str:
    """Role of ``seat`` as seen from ``observer``: self, teammate, next or previous."""
    if seat == observer:
        return "self"
    if seat == teammate(observer):
        return "teammate"
    if seat == (observer + 1) % 4:
        return "next"
    return "previous"


# --------------------------------------------------------------------------
# rendered text


@dataclass(frozen=True)
class RenderedObservation:
    text: str
    locale: str


@dataclass(frozen=True)
class RenderedHistory:
    text: str
    locale: str


@dataclass(frozen=True)
class RuleText:
    text: str
    locale: str


def render_observation(
    observation: Observation, locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None
) -> RenderedObservation:
    st = get_store(locale, store)
    seat = observation.seat
    sep = st.terms["separator"]
    if observation.last_play is None:
        last = st.render("observation", "no_last_play")
    else:
        owner, combo = observation.last_play
        last = st.render(
            "observation",
            "last_play",
            seat=owner,
            role=st.role_name(role_of(seat, owner)),
            kind=st.kind_name(combo.kind),
            cards=combo_cards_text(combo, st),
            count=_count_for(observation, owner),
        )
    text = st.render(
        "observation",
        hand=sep.join(card_name(c, st) for c in display_order(observation.hand)),
        hand_count=len(observation.hand),
        level_card=card_name(card(observation.level, Suit.HEARTS), st),
        teammate_seat=teammate(seat),
        teammate_count=observation.teammate_count,
        next_seat=(seat + 1) % 4,
        next_count=observation.next_opponent_count,
        previous_seat=(seat + 3) % 4,
        previous_count=observation.previous_opponent_count,
        lead_status=st.render("observation", "lead_yes" if observation.has_lead else "lead_no"),
        last_play=last,
    )
    return RenderedObservation(text, locale)


def _count_for(observation: Observation, seat: int) -> int:
    role = role_of(observation.seat, seat)
    return {
        "self": len(observation.hand),
        "teammate": observation.teammate_count,
        "next": observation.next_opponent_count,
        "previous": observation.previous_opponent_count,
    }[role]


def raw_state_json(observation: Observation) -> str:
    """The observation as plain JSON, for the optional model-side conversion."""
    last = None
    if observation.last_play is not None:
        owner, combo = observation.last_play
        last = {
            "seat": owner,
            "role": role_of(observation.seat, owner),
            "kind": combo.kind.label,
            "cards": [c.text for c in combo.cards],
            "wild": {c.text: f"{s.letter}{r.symbol}" for c, r, s in combo.wild},
        }
    state = {
        "seat": observation.seat,
        "hand": [c.text for c in display_order(observation.hand)],
        "level_card": card(observation.level, Suit.HEARTS).text.split("#")[0],
        "teammate_cards": observation.teammate_count,
        "next_opponent_cards": observation.next_opponent_count,
        "previous_opponent_cards": observation.previous_opponent_count,
        "has_lead": observation.has_lead,
        "last_play": last,
    }
    return json.dumps(state, ensure_ascii=False, sort_keys=True)


def render_history(
    history: Sequence[HistoryEvent], observer_seat: int, locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None
) -> RenderedHistory:
    st = get_store(locale, store)
    if not 0 <= observer_seat < 4:
        raise InvalidInput(f"observer seat must be 0..3, got {observer_seat}")
    lines = []
    for n, event in enumerate(history, start=1):
        role = st.role_name(role_of(observer_seat, event.seat))
        if isinstance(event.action, Pass):
            lines.append(st.render("history", "pass", n=n, seat=event.seat, role=role))
        else:
            lines.append(
                st.render(
                    "history",
                    "play",
                    n=n,
                    seat=event.seat,
                    role=role,
                    kind=st.kind_name(event.action.kind),
                    cards=combo_cards_text(event.action, st),
                )
            )
    body = "\n".join(lines) if lines else st.render("history", "empty")
    return RenderedHistory(st.render("history", lines=body), locale)


def render_rules(level: Rank, locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None) -> RuleText:
    st = get_store(locale, store)
    level = Rank(level)
    return RuleText(
        st.render("rules", level_rank=level.symbol, level_card=card_name(card(level, Suit.HEARTS), st)),
        locale,
    )


def render_action(index: int, action: Action, locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None) -> str:
    st = get_store(locale, store)
    if isinstance(action, Pass):
        kind, cards = st.kind_name("pass"), st.terms["no_cards"]
    else:
        kind, cards = st.kind_name(action.kind), combo_cards_text(action, st)
    return st.render("plan", "action", index=index, kind=kind, cards=cards)


def render_action_lines(
    actions: Iterable[Action], locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None
) -> str:
    return "\n".join(render_action(i, a, locale, store) for i, a in enumerate(actions))
