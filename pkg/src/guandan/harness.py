"""Evaluation protocols, score reports and action-distribution statistics.

A *game* here is one deal played from a fresh shuffle.  Game ``i`` of a
series uses seed ``base_seed + i``; agent seeds are derived from the game
seed and the seat, never from the team, so swapping teams between halves of
a position-swap series replays exactly the same cards and random streams.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .agents import Agent, best_p_low_v_agent, random_agent
from .cards import Rank
from .engine import MatchConfig, new_deal, run_deal
from .errors import InvalidInput
from .recommender import DEFAULT_K, ScoreWeights, reco_agent

log = logging.getLogger(__name__)

__all__ = [
    "AGENT_NAMES",
    "AgentSpec",
    "GameRow",
    "SeriesReport",
    "ActionStats",
    "run_seeded_series",
    "run_position_swap",
    "collect_action_stats",
    "load_log_lines",
    "write_jsonl",
    "agent_seed",
]

AGENT_NAMES = ("random", "rule", "reco", "tom-vanilla", "tom-1st", "tom-2nd")
_TOM_MODES = {"tom-vanilla": "vanilla", "tom-1st": "first", "tom-2nd": "second"}

POS_A = "(Pos 0 & 2)"
POS_B = "(Pos 1 & 3)"


def agent_seed(game_seed: int, seat: int) -> int:
    return game_seed * 4 + seat


@dataclass(frozen=True)
class AgentSpec:
    """A picklable recipe for building one agent per seat.

    ``backend`` configures the language-model agents: ``{"kind": "mock"}``
    (optionally with ``"default"``) or ``{"kind": "http", "base_url": ...}``.
    """

    name: str
    k: int = DEFAULT_K
    locale: str = "zh"
    weights: Mapping[str, float] = field(default_factory=dict)
    backend: Mapping[str, Any] = field(default_factory=lambda: {"kind": "mock"})
    model: str = "mock"
    temperature: float = 0.0
    max_output: int = 2048
    timeout: float = 60.0
    window: int = 8
    llm_observation: bool = False

    def __post_init__(self) -> None:
        if self.name not in AGENT_NAMES:
            raise InvalidInput(f"unknown agent {self.name!r}; expected one of {', '.join(AGENT_NAMES)}")

    def __call__(self, seat: int, seed: int) -> Agent:
        if self.name == "random":
            return random_agent(seed)
        if self.name == "rule":
            return best_p_low_v_agent()
        if self.name == "reco":
            return reco_agent(ScoreWeights.from_mapping(self.weights))
        from .recommender import HeuristicScorer
        from .tom import BackendParams, TomAgent

        params = BackendParams(self.model, self.temperature, self.max_output, self.timeout)
        return TomAgent(
            _TOM_MODES[self.name],
            make_backend(self.backend),
            self.k,
            self.locale,
            params,
            self.window,
            scorer=HeuristicScorer(ScoreWeights.from_mapping(self.weights)),
            llm_observation=self.llm_observation,
        )


def make_backend(config: Mapping[str, Any]):
    from .tom import HttpBackend, MockBackend

    cfg = dict(config)
    kind = cfg.pop("kind", "mock")
    if kind == "mock":
        return MockBackend(default=cfg.pop("default", "Chosen plan: 0"))
    if kind == "http":
        if "base_url" not in cfg:
            raise InvalidInput("the http backend needs a base_url")
        return HttpBackend(**cfg)
    raise InvalidInput(f"unknown backend kind {kind!r}")


AgentFactory = Callable[[int, int], Agent]
TeamSpec = Union[str, AgentSpec, AgentFactory]


def _as_factory(spec: TeamSpec) -> AgentFactory:
    if isinstance(spec, str):
        return AgentSpec(spec)
    return spec


def _spec_name(spec: TeamSpec) -> str:
    if isinstance(spec, str):
        return spec
    if isinstance(spec, AgentSpec):
        return spec.name
    return getattr(spec, "__name__", type(spec).__name__)


@dataclass(frozen=True)
class GameRow:
    game: int
    seed: int
    team_a_seats: tuple[int, int]
    team_a_points: int
    finish_order: tuple[int, ...]

    @property
    def position(self) -> str:
        return POS_A if self.team_a_seats == (0, 2) else POS_B


@dataclass
class SeriesReport:
    protocol: str
    team_a: str
    team_b: str
    base_seed: int
    rows: list[GameRow]
    logs: list[dict[str, Any]] = field(default_factory=list, repr=False)

    @property
    def average(self) -> float:
        return _mean([r.team_a_points for r in self.rows])

    def position_average(self, position: str) -> float:
        return _mean([r.team_a_points for r in self.rows if r.position == position])

    def summary(self) -> list[dict[str, Any]]:
        out = []
        if self.protocol == "swap":
            for pos in (POS_A, POS_B):
                rows = [r for r in self.rows if r.position == pos]
                out.append({"label": f"{self.team_a} {pos}", "games": len(rows), "average": _mean([r.team_a_points for r in rows])})
            out.append({"label": f"{self.team_a} (combined)", "games": len(self.rows), "average": self.average})
        else:
            out.append({"label": f"{self.team_a} vs {self.team_b}", "games": len(self.rows), "average": self.average})
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "protocol": self.protocol,
            "team_a": self.team_a,
            "team_b": self.team_b,
            "base_seed": self.base_seed,
            "games": [
                {
                    "game": r.game,
                    "seed": r.seed,
                    "position": r.position,
                    "team_a_seats": list(r.team_a_seats),
                    "team_a_points": r.team_a_points,
                    "finish_order": list(r.finish_order),
                }
                for r in self.rows
            ],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        rows = self.summary()
        width = max(len("Team A"), *(len(r["label"]) for r in rows))
        lines = [
            f"protocol={self.protocol} team_a={self.team_a} team_b={self.team_b} base_seed={self.base_seed}",
            f"{'Team A':<{width}}  {'Games':>6}  {'Avg points':>10}",
        ]
        for r in rows:
            lines.append(f"{r['label']:<{width}}  {r['games']:>6}  {r['average']:>10.3f}")
        return "\n".join(lines)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _play_game(task: tuple) -> tuple[GameRow, list[dict[str, Any]]]:
    game, seed, a_factory, b_factory, a_seats, level, keep_log = task
    agents = []
    for seat in range(4):
        factory = a_factory if seat in a_seats else b_factory
        agents.append(factory(seat, agent_seed(seed, seat)))
    config = MatchConfig(num_deals=1, base_seed=seed, level_schedule=(level,))
    result = run_deal(new_deal(config, 0), agents, deal_index=game, record=keep_log)
    points = result.team_points[a_seats[0] % 2]
    row = GameRow(game, seed, a_seats, points, result.finish_order)
    return row, result.log if keep_log else []


def _run(tasks: list[tuple], parallel: int) -> list[tuple[GameRow, list[dict[str, Any]]]]:
    if parallel > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_play_game, tasks))
    return [_play_game(t) for t in tasks]


def run_seeded_series(
    team_a: TeamSpec,
    team_b: TeamSpec,
    n_games: int,
    base_seed: int = 0,
    level: Rank = Rank.TWO,
    parallel: int = 1,
    keep_logs: bool = False,
) -> SeriesReport:
    """Play ``n_games`` games with team A at seats 0 and 2; game ``i`` uses seed ``base_seed + i``."""
    if n_games < 1:
        raise InvalidInput("n_games must be at least 1")
    a, b = _as_factory(team_a), _as_factory(team_b)
    tasks = [(i, base_seed + i, a, b, (0, 2), level, keep_logs) for i in range(n_games)]
    results = _run(tasks, parallel)
    return SeriesReport(
        "seeded",
        _spec_name(team_a),
        _spec_name(team_b),
        base_seed,
        [row for row, _ in results],
        [line for _, lines in results for line in lines],
    )


def run_position_swap(
    team_a: TeamSpec,
    team_b: TeamSpec,
    n_games: int,
    base_seed: int = 0,
    level: Rank = Rank.TWO,
    parallel: int = 1,
    keep_logs: bool = False,
) -> SeriesReport:
    """First half with team A at seats 0 and 2, second half at 1 and 3, on the same seeds."""
    if n_games < 2 or n_games % 2:
        raise InvalidInput(f"position swap needs an even number of games, got {n_games}")
    half = n_games // 2
    a, b = _as_factory(team_a), _as_factory(team_b)
    tasks = [(i, base_seed + i, a, b, (0, 2), level, keep_logs) for i in range(half)]
    tasks += [(half + i, base_seed + i, a, b, (1, 3), level, keep_logs) for i in range(half)]
    results = _run(tasks, parallel)
    return SeriesReport(
        "swap",
        _spec_name(team_a),
        _spec_name(team_b),
        base_seed,
        [row for row, _ in results],
        [line for _, lines in results for line in lines],
    )


# --------------------------------------------------------------------------
# action statistics


@dataclass
class ActionStats:
    lengths: Counter = field(default_factory=Counter)
    selected: Counter = field(default_factory=Counter)
    skipped: int = 0

    @property
    def decisions(self) -> int:
        return sum(self.lengths.values())

    @property
    def max_length(self) -> int:
        return max(self.lengths, default=0)

    def write_csv(self, directory: str | os.PathLike) -> tuple[Path, Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        paths = (out / "action_lengths.csv", out / "selected_index.csv")
        for path, hist in zip(paths, (self.lengths, self.selected)):
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["bin", "count"])
                for b in sorted(hist):
                    writer.writerow([b, hist[b]])
        return paths


def collect_action_stats(logs: Iterable[Mapping[str, Any] | str], seats: Iterable[int] | None = None) -> ActionStats:
    """Histogram legal-list lengths and chosen indices over logged decisions.

    Lines may be dicts or raw JSON strings.  Deal summaries, violation lines
    and language-model decision records are not engine decisions and are
    ignored; anything unreadable is skipped
    and counted.  ``seats`` restricts the count to the instrumented seats.
    """
    wanted = None if seats is None else set(seats)
    stats = ActionStats()
    for raw in logs:
        line = raw
        if isinstance(raw, str):
            if not raw.strip():
                continue
            try:
                line = json.loads(raw)
            except json.JSONDecodeError:
                stats.skipped += 1
                continue
        if not isinstance(line, Mapping):
            stats.skipped += 1
            continue
        if "finish_order" in line or "violation" in line or "prompts" in line:
            continue
        n, idx, seat = line.get("n_legal"), line.get("chosen_index"), line.get("seat")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, idx, seat)) or not 0 <= idx < n:
            stats.skipped += 1
            continue
        if wanted is not None and seat not in wanted:
            continue
        stats.lengths[n] += 1
        stats.selected[idx] += 1
    if stats.skipped:
        log.warning("skipped %d malformed log line(s)", stats.skipped)
    return stats


def load_log_lines(path: str | os.PathLike) -> list[str]:
    """Raw lines of one ``.jsonl`` file or of every ``.jsonl`` file in a directory (sorted by name)."""
    p = Path(path)
    if p.is_dir():
        files = sorted(p.glob("*.jsonl"))
    elif p.is_file():
        files = [p]
    else:
        raise InvalidInput(f"no such log file or directory: {p}")
    lines: list[str] = []
    for f in files:
        lines.extend(f.read_text(encoding="utf-8").splitlines())
    return lines


def write_jsonl(lines: Iterable[Mapping[str, Any]], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(json.dumps(line, ensure_ascii=False, sort_keys=True) + "\n")
