"""Deal and match state machine: turns, trick closure, finishing order, scoring, logs."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .cards import Card, Rank, Suit, build_deck, check_level, deal, parse_card
from .combos import PASS, Action, Combo, ComboKind, Pass, enumerate_legal_actions, validate_combo
from .errors import IllegalAction, InvalidInput, InvalidState

log = logging.getLogger(__name__)

__all__ = [
    "HistoryEvent",
    "DealState",
    "DealResult",
    "MatchConfig",
    "MatchResult",
    "team_of",
    "teammate",
    "new_deal",
    "legal_actions",
    "apply_action",
    "deal_outcome",
    "run_deal",
    "run_match",
    "replay_deal",
    "state_digest",
    "action_from_record",
]


def team_of(seat: int) -> int:
    """Seats 0 and 2 form team 0, seats 1 and 3 team 1."""
    return seat % 2


def teammate(seat: int) -> int:
    return (seat + 2) % 4


@dataclass(frozen=True)
class HistoryEvent:
    seat: int
    action: Action
    hand_size_after: int


@dataclass(frozen=True)
class DealState:
    hands: tuple[tuple[Card, ...], ...]
    level: Rank
    current_seat: int | None
    trick_leader: int
    incumbent: tuple[int, Combo] | None = None
    passed: frozenset[int] = frozenset()
    finish_order: tuple[int, ...] = ()
    history: tuple[HistoryEvent, ...] = ()
    rng_seed: int = 0

    @property
    def is_over(self) -> bool:
        return len(self.finish_order) == 4

    @property
    def consecutive_passes(self) -> int:
        return len(self.passed)

    @property
    def hand_sizes(self) -> list[int]:
        return [len(h) for h in self.hands]


@dataclass(frozen=True)
class DealResult:
    finish_order: tuple[int, ...]
    team_points: dict[int, int]
    final_state: DealState | None = field(default=None, compare=False, repr=False)
    log: list[dict[str, Any]] = field(default_factory=list, compare=False, repr=False)
    violations: list[dict[str, Any]] = field(default_factory=list, compare=False, repr=False)

    def points_for_seat(self, seat: int) -> int:
        return self.team_points[team_of(seat)]


@dataclass
class MatchConfig:
    """Settings for a multi-deal match.

    ``agents`` holds one bound agent per seat; they persist across deals.
    """

    num_deals: int = 1
    base_seed: int = 0
    level_schedule: tuple[Rank, ...] = (Rank.TWO,)
    agents: Sequence[Any] = ()

    def __post_init__(self) -> None:
        if self.num_deals < 1:
            raise InvalidInput("num_deals must be at least 1")
        if not self.level_schedule:
            raise InvalidInput("level_schedule must not be empty")
        self.level_schedule = tuple(check_level(lv) for lv in self.level_schedule)

    def level_for(self, deal_index: int) -> Rank:
        return self.level_schedule[deal_index % len(self.level_schedule)]


@dataclass
class MatchResult:
    deals: list[DealResult]
    totals: dict[int, int]

    @property
    def log(self) -> list[dict[str, Any]]:
        return [line for d in self.deals for line in d.log]


# --------------------------------------------------------------------------
# state transitions


def new_deal(config: MatchConfig, deal_index: int, leader: int = 0) -> DealState:
    """Fresh deal: cards dealt with seed ``base_seed + deal_index``."""
    if not 0 <= deal_index < config.num_deals:
        raise InvalidInput(f"deal_index {deal_index} outside 0..{config.num_deals - 1}")
    seed = config.base_seed + deal_index
    hands = deal(build_deck(), seed)
    return DealState(
        hands=tuple(hands),
        level=config.level_for(deal_index),
        current_seat=leader,
        trick_leader=leader,
        rng_seed=seed,
    )


def legal_actions(state: DealState) -> list[Action]:
    if state.is_over or state.current_seat is None:
        raise InvalidState("the deal is over")
    hand = state.hands[state.current_seat]
    incumbent = state.incumbent[1] if state.incumbent else None
    return enumerate_legal_actions(hand, incumbent, state.level)


def _next_holder(finished: Sequence[int], seat: int) -> int:
    for step in range(1, 5):
        cand = (seat + step) % 4
        if cand not in finished:
            return cand
    raise InvalidState("no seat holds cards")


def apply_action(state: DealState, action: Action, legal: Sequence[Action] | None = None) -> DealState:
    """Return the state after the current seat performs ``action``.

    ``legal`` may carry an already computed ``legal_actions(state)`` to avoid
    enumerating twice.
    """
    if state.is_over or state.current_seat is None:
        raise InvalidState("the deal is over")
    if legal is None:
        legal = legal_actions(state)
    if action not in legal:
        if isinstance(action, Pass):
            raise IllegalAction("the leading seat cannot pass")
        raise IllegalAction(f"{getattr(action, 'text', action)!r} is not in the legal action list")
    return _advance(state, action)


def _advance(state: DealState, action: Action) -> DealState:
    seat = state.current_seat
    hands = list(state.hands)
    finish = state.finish_order
    level, leader, seed = state.level, state.trick_leader, state.rng_seed

    if isinstance(action, Combo):
        played = set(action.cards)
        hands[seat] = tuple(c for c in hands[seat] if c not in played)
        history = state.history + (HistoryEvent(seat, action, len(hands[seat])),)
        if not hands[seat]:
            finish = finish + (seat,)
        if len(finish) == 3:
            finish = finish + tuple(s for s in range(4) if s not in finish)
            nxt = None
        else:
            nxt = _next_holder(finish, seat)
        return DealState(tuple(hands), level, nxt, leader, (seat, action), frozenset(), finish, history, seed)

    history = state.history + (HistoryEvent(seat, PASS, len(hands[seat])),)
    owner = state.incumbent[0]
    passed = state.passed | {seat}
    if all(s in passed or s == owner or s in finish for s in range(4)):
        if owner not in finish:
            leader = owner
        elif teammate(owner) not in finish:
            leader = teammate(owner)
        else:
            leader = _next_holder(finish, owner)
        return DealState(state.hands, level, leader, leader, None, frozenset(), finish, history, seed)
    return DealState(state.hands, level, _next_holder(finish, seat), leader, state.incumbent, passed, finish, history, seed)


def deal_outcome(finish_order: Sequence[int]) -> DealResult:
    """Score a finished deal: the first finisher's team wins 4, 2 or 1 points."""
    order = tuple(finish_order)
    if sorted(order) != [0, 1, 2, 3]:
        raise InvalidInput(f"finish order must be a permutation of the four seats, got {order}")
    winner = order[0]
    partner_place = order.index(teammate(winner))
    points = {1: 4, 2: 2, 3: 1}[partner_place]
    team = team_of(winner)
    return DealResult(order, {team: points, 1 - team: -points})


# --------------------------------------------------------------------------
# serialisation


def _combo_record(combo: Combo) -> tuple[list[str], dict[str, str]]:
    cards = [c.text for c in combo.cards]
    wild = {c.text: f"{s.letter}{r.symbol}" for c, r, s in combo.wild}
    return cards, wild


def action_record(
    deal_index: int, step: int, seat: int, action: Action, before: DealState, after: DealState
) -> dict[str, Any]:
    if isinstance(action, Combo):
        kind = action.kind.label
        cards, wild = _combo_record(action)
    else:
        kind, cards, wild = "pass", [], {}
    return {
        "deal": deal_index,
        "step": step,
        "seat": seat,
        "action_kind": kind,
        "cards": cards,
        "wild": wild,
        "hand_sizes": after.hand_sizes,
        "incumbent": before.incumbent[1].text if before.incumbent else None,
    }


def action_from_record(record: Mapping[str, Any], level: Rank) -> Action:
    """Rebuild the action stored in one game-log line."""
    if record["action_kind"] == "pass":
        return PASS
    kind = ComboKind.from_label(record["action_kind"])
    cards = [parse_card(t) for t in record["cards"]]
    wild = {}
    for card_text, rep in record.get("wild", {}).items():
        suit = Suit.from_letter(rep[0])
        wild[parse_card(card_text)] = (Rank.from_symbol(rep[1:]), suit)
    return validate_combo(cards, kind, wild, level)


def state_digest(state: DealState) -> str:
    """SHA-256 over a canonical JSON rendering of the full state."""

    def act(a: Action) -> Any:
        return "pass" if isinstance(a, Pass) else a.text

    payload = {
        "hands": [[c.id for c in h] for h in state.hands],
        "level": int(state.level),
        "current_seat": state.current_seat,
        "trick_leader": state.trick_leader,
        "incumbent": None if state.incumbent is None else [state.incumbent[0], state.incumbent[1].text],
        "passed": sorted(state.passed),
        "finish_order": list(state.finish_order),
        "history": [[e.seat, act(e.action), e.hand_size_after] for e in state.history],
        "rng_seed": state.rng_seed,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


# --------------------------------------------------------------------------
# game loops


def _ask(agent: Any, obs: Any, legal: Sequence[Action]) -> tuple[Action | None, str | None]:
    try:
        action = agent.act(obs)
    except Exception as exc:  # agents are untrusted; any failure becomes a violation
        return None, f"agent raised {type(exc).__name__}: {exc}"
    if action in legal:
        return action, None
    return None, f"illegal action {getattr(action, 'text', action)!r}"


def run_deal(state: DealState, agents: Sequence[Any], deal_index: int = 0, record: bool = True) -> DealResult:
    """Play ``state`` to the end with one agent per seat.

    An agent that fails or answers illegally is asked once more; after a
    second failure the engine substitutes Pass (or the first legal action
    when leading) and records a violation.  ``record=False`` skips the
    per-action log lines (violations are still kept).
    """
    from .agents import observe

    if len(agents) != 4:
        raise InvalidInput("exactly four agents are required")
    lines: list[dict[str, Any]] = []
    violations: list[dict[str, Any]] = []
    while not state.is_over:
        seat = state.current_seat
        step = len(state.history)
        legal = legal_actions(state)
        obs = observe(state, legal, deal_index=deal_index, step=step)
        agent = agents[seat]
        action, problem = _ask(agent, obs, legal)
        if action is None:
            action, problem2 = _ask(agent, obs, legal)
            if action is None:
                action = PASS if PASS in legal else legal[0]
                bad = {"deal": deal_index, "step": step, "seat": seat, "violation": problem2 or problem}
                violations.append(bad)
                lines.append(bad)
                log.warning("seat %d violation at step %d: %s", seat, step, bad["violation"])
        after = _advance(state, action)
        if record:
            choice = getattr(agent, "last_choice", None)
            chosen_index = legal.index(action)
            if choice is not None and problem is None:
                chosen_index = choice[0]
            line = action_record(deal_index, step, seat, action, state, after)
            line["n_legal"] = len(legal)
            line["chosen_index"] = chosen_index
            lines.append(line)
        state = after
    result = deal_outcome(state.finish_order)
    lines.append(
        {
            "deal": deal_index,
            "finish_order": list(result.finish_order),
            "team_points": {str(k): v for k, v in sorted(result.team_points.items())},
        }
    )
    return DealResult(result.finish_order, result.team_points, state, lines, violations)


def run_match(config: MatchConfig) -> MatchResult:
    """Play ``config.num_deals`` deals; each deal after the first is led by the previous winner."""
    if len(config.agents) != 4:
        raise InvalidInput("MatchConfig.agents must bind exactly four agents")
    results: list[DealResult] = []
    totals = {0: 0, 1: 0}
    leader = 0
    for i in range(config.num_deals):
        state = new_deal(config, i, leader=leader)
        res = run_deal(state, config.agents, deal_index=i)
        results.append(res)
        for team, pts in res.team_points.items():
            totals[team] += pts
        leader = res.finish_order[0]
    return MatchResult(results, totals)


def replay_deal(lines: Iterable[Mapping[str, Any]], config: MatchConfig, deal_index: int) -> DealState:
    """Fold the logged actions of one deal over a fresh deal and return the final state."""
    records = [r for r in lines if r.get("deal") == deal_index and "action_kind" in r]
    if not records:
        raise InvalidInput(f"no action records for deal {deal_index}")
    records.sort(key=lambda r: r["step"])
    state = new_deal(config, deal_index, leader=records[0]["seat"])
    for rec in records:
        if rec["seat"] != state.current_seat:
            raise InvalidState(f"log step {rec['step']} is for seat {rec['seat']}, expected {state.current_seat}")
        state = apply_action(state, action_from_record(rec, state.level))
    return state
