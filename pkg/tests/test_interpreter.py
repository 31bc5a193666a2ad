from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from rule_table import make
from guandan.cards import Rank, parse_card
from guandan.combos import PASS, ComboKind as K
from guandan.errors import InvalidInput
from guandan.fixtures import reference_history, reference_observation
from guandan.interpreter import (
    TemplateStore,
    card_name,
    combo_cards_text,
    fill,
    parse_sections,
    render_action_lines,
    render_history,
    render_observation,
    render_rules,
    role_of,
)


def test_fill_requires_every_placeholder():
    assert fill("a {{x}} b", {"x": 1}) == "a 1 b"
    with pytest.raises(InvalidInput):
        fill("a {{x}} {{y}}", {"x": 1})


def test_parse_sections():
    assert parse_sections("[a]\none\n\n[b]\ntwo\n") == {"a": "one", "b": "two"}
    with pytest.raises(InvalidInput):
        parse_sections("stray\n[a]\n")


def test_roles_relative_to_observer():
    assert [role_of(1, s) for s in range(4)] == ["previous", "self", "next", "teammate"]


def test_card_names_both_locales():
    en, zh = TemplateStore("en"), TemplateStore("zh")
    assert card_name(parse_card("C A"), en) == "Club A"
    assert card_name(parse_card("BJ"), en) == "Black Joker"
    assert card_name(parse_card("C A"), zh) == "梅花 A"
    assert card_name(parse_card("RJ"), zh) == "大王"


def test_wildcard_shows_its_target():
    en = TemplateStore("en")
    combo = make(K.PAIR, "D9 H5", Rank.FIVE, {"H5": "S9"})
    assert combo_cards_text(combo, en) == "Diamond 9, Heart 5 as Heart 9"
    assert combo_cards_text(make(K.SINGLE, "H5", Rank.FIVE), en) == "Heart 5"


def test_action_lines_number_from_zero():
    obs = reference_observation()
    assert render_action_lines(obs.legal_actions, "en").splitlines() == [
        "Legal action index 0: pair - Club A, Club A",
        "Legal action index 1: pass - no cards",
    ]
    assert "合法动作索引1：过牌" in render_action_lines([make(K.PAIR, "DA CA"), PASS], "zh")


def test_observation_mentions_counts_and_lead():
    text = render_observation(reference_observation(), "en").text
    assert "13 cards in all" in text and "(seat 1) has 2 cards left" in text
    assert "I do not hold the lead" in text


def test_history_empty_and_windowed():
    assert render_history((), 0, "en").text.endswith("Nothing has been played yet.")
    lines = render_history(reference_history(), 0, "en").text.splitlines()
    assert sum(1 for ln in lines if ln[:1].isdigit()) == 8
    with pytest.raises(InvalidInput):
        render_history((), 4, "en")


def test_rules_name_the_level():
    assert "Heart J" in render_rules(Rank.JACK, "en").text
    assert "红心 J" in render_rules(Rank.JACK, "zh").text


def test_unknown_locale():
    with pytest.raises(InvalidInput):
        TemplateStore("fr")
    with pytest.raises(InvalidInput):
        render_rules(Rank.TWO, "fr")


def test_custom_template_directory(tmp_path: Path):
    src = resources.files("guandan") / "templates" / "en"
    dst = tmp_path / "en"
    dst.mkdir()
    for item in src.iterdir():
        (dst / item.name).write_text(item.read_text(encoding="utf-8"), encoding="utf-8")
    rules = dst / "rules.txt"
    rules.write_text("[main]\nShort rules, level {{level_rank}}.\n", encoding="utf-8")
    store = TemplateStore("en", tmp_path)
    assert render_rules(Rank.KING, "en", store).text == "Short rules, level K."
    (dst / "plan.txt").unlink()
    with pytest.raises(InvalidInput):
        TemplateStore("en", tmp_path)


def test_roles_swap_between_opposite_observers():
    events = reference_history()
    one = render_history(events, 1, "en").text
    three = render_history(events, 3, "en").text
    # seat 2 sits after seat 1 and before seat 3
    assert "Seat 2 (next opponent) played single" in one
    assert "Seat 2 (previous opponent) played single" in three
    assert "Seat 1 (me) passed" in one and "Seat 3 (me) passed" in three


def test_history_role_tags_match_hand_computation():
    events = reference_history()
    tags = {0: "self", 1: "next", 2: "teammate", 3: "previous"}
    store = TemplateStore("en")
    lines = [ln for ln in render_history(events, 0, "en").text.splitlines() if ln[:1].isdigit()]
    for line, event in zip(lines, events):
        assert f"Seat {event.seat} ({store.role_name(tags[event.seat])})" in line


def test_different_counts_render_differently():
    from dataclasses import replace

    obs = reference_observation()
    texts = {
        render_observation(o, "zh").text
        for o in (obs, replace(obs, teammate_count=7), replace(obs, next_opponent_count=3), replace(obs, has_lead=True))
    }
    assert len(texts) == 4


def test_raw_state_is_plain_json():
    import json

    from guandan.interpreter import raw_state_json

    state = json.loads(raw_state_json(reference_observation()))
    assert state["level_card"] == "H J" and state["last_play"]["role"] == "teammate"
    assert len(state["hand"]) == 13
