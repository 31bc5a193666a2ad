"""Command-line entry point: ``simulate``, ``evaluate``, ``analyze`` and ``render-prompt``.

Settings come from an optional JSON file (``--config``) and are overridden
by flags.  Exit codes: 0 success, 2 configuration or usage error, 3 runtime
failure.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Sequence

from .cards import Rank
from .engine import MatchConfig, run_match
from .errors import GuandanError, InvalidInput
from .harness import (
    AGENT_NAMES,
    AgentSpec,
    agent_seed,
    collect_action_stats,
    load_log_lines,
    run_position_swap,
    run_seeded_series,
    write_jsonl,
)
from .interpreter import LOCALES
from .recommender import DEFAULT_K, ScoreWeights

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

_MODE_ALIASES = {"vanilla": "vanilla", "0": "vanilla", "1st": "first", "first": "first", "2nd": "second", "second": "second"}
_BACKEND_KEYS = {"base_url", "model", "api_key_env", "temperature", "max_output", "timeout", "retries", "min_interval"}
_RECOMMENDER_KEYS = {"k", "weights"}


@dataclass
class RunConfig:
    agents: list[str] = field(default_factory=lambda: ["random"] * 4)
    team_a: str = "rule"
    team_b: str = "random"
    protocol: str = "seeded"
    deals: int = 1
    games: int = 40
    base_seed: int = 0
    level_schedule: list[str] = field(default_factory=lambda: ["2"])
    recommender: dict[str, Any] = field(default_factory=lambda: {"k": DEFAULT_K, "weights": {}})
    locale: str = "zh"
    backend: dict[str, Any] = field(default_factory=dict)
    out: str = "out"
    parallel: int = 1
    live: bool = False
    llm_observation: bool = False

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidInput(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**data)

    def validate(self) -> "RunConfig":
        for name in [*self.agents, self.team_a, self.team_b]:
            if name not in AGENT_NAMES:
                raise InvalidInput(f"unknown agent {name!r}; expected one of {', '.join(AGENT_NAMES)}")
        if len(self.agents) != 4:
            raise InvalidInput(f"simulate needs four agents, got {len(self.agents)}")
        if self.protocol not in ("seeded", "swap"):
            raise InvalidInput(f"unknown protocol {self.protocol!r}")
        if self.deals < 1 or self.games < 1:
            raise InvalidInput("deal and game counts must be positive")
        if self.parallel < 1:
            raise InvalidInput("--parallel must be at least 1")
        if self.locale not in LOCALES:
            raise InvalidInput(f"unknown locale {self.locale!r}")
        self.levels()
        unknown = set(self.recommender) - _RECOMMENDER_KEYS
        if unknown:
            raise InvalidInput(f"unknown recommender key(s): {', '.join(sorted(unknown))}")
        k = self.recommender.get("k", DEFAULT_K)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise InvalidInput(f"recommender.k must be a positive integer, got {k!r}")
        ScoreWeights.from_mapping(self.recommender.get("weights", {}))
        unknown = set(self.backend) - _BACKEND_KEYS
        if unknown:
            raise InvalidInput(f"unknown backend key(s): {', '.join(sorted(unknown))}")
        if not isinstance(self.live, bool) or not isinstance(self.llm_observation, bool):
            raise InvalidInput("live and llm_observation must be true or false")
        if self.live and "base_url" not in self.backend:
            raise InvalidInput("--live needs backend.base_url in the config")
        return self

    def levels(self) -> tuple[Rank, ...]:
        try:
            levels = tuple(Rank.from_symbol(str(s)) for s in self.level_schedule)
        except GuandanError as exc:
            raise InvalidInput(f"bad level_schedule: {exc}") from None
        if not levels or any(lv.is_joker for lv in levels):
            raise InvalidInput("level_schedule needs one or more non-joker ranks")
        return levels

    def spec(self, name: str) -> AgentSpec:
        b = self.backend
        if self.live:
            backend = {"kind": "http", "base_url": b["base_url"]}
            for key in ("api_key_env", "retries", "min_interval"):
                if key in b:
                    backend[key] = b[key]
        else:
            backend = {"kind": "mock"}
        return AgentSpec(
            name,
            k=self.recommender.get("k", DEFAULT_K),
            locale=self.locale,
            weights=dict(self.recommender.get("weights", {})),
            backend=backend,
            model=b.get("model", "mock"),
            temperature=b.get("temperature", 0.0),
            max_output=b.get("max_output", 2048),
            timeout=b.get("timeout", 60.0),
            llm_observation=self.llm_observation,
        )


# --------------------------------------------------------------------------
# commands


def cmd_simulate(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    agents = [cfg.spec(name)(seat, agent_seed(cfg.base_seed, seat)) for seat, name in enumerate(cfg.agents)]
    match = MatchConfig(cfg.deals, cfg.base_seed, cfg.levels(), agents)
    result = run_match(match)
    for i, deal in enumerate(result.deals):
        order = ",".join(str(s) for s in deal.finish_order)
        print(f"deal {i}: finish {order} team0 {deal.team_points[0]:+d} team1 {deal.team_points[1]:+d}")
    print(f"total: team0 {result.totals[0]:+d} team1 {result.totals[1]:+d}")
    write_jsonl(result.log, out / "games.jsonl")
    decisions = [d for a in agents for d in getattr(a, "decisions", [])]
    if decisions:
        decisions.sort(key=lambda d: (d["deal"], d["step"]))
        write_jsonl(decisions, out / "decisions.jsonl")
    print(f"logs written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig, write_logs: bool = False) -> int:
    run = run_seeded_series if cfg.protocol == "seeded" else run_position_swap
    report = run(
        cfg.spec(cfg.team_a),
        cfg.spec(cfg.team_b),
        cfg.games,
        cfg.base_seed,
        cfg.levels()[0],
        parallel=cfg.parallel,
        keep_logs=write_logs,
    )
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "report.txt").write_text(report.to_table() + "\n", encoding="utf-8")
    if write_logs:
        write_jsonl(report.logs, out / "games.jsonl")
    print(report.to_table())
    return EXIT_OK


def cmd_analyze(logs: str, out: str, seats: Sequence[int] | None) -> int:
    lines = load_log_lines(logs)
    stats = collect_action_stats(lines, seats)
    paths = stats.write_csv(out)
    print(f"decisions={stats.decisions} max_length={stats.max_length} skipped={stats.skipped}")
    for p in paths:
        print(p)
    return EXIT_OK


def render_prompts(mode: str, locale: str, k: int = DEFAULT_K) -> str:
    """Every prompt the agent would send on the reference position, in call order."""
    from .fixtures import reference_observation
    from .recommender import score_actions, top_k
    from .tom import (
        BeliefReport,
        build_belief_prompt,
        build_plan_eval_prompt,
        build_second_order_prompt,
        make_context,
    )

    obs = reference_observation()
    ctx = make_context(obs, locale)
    parts = []
    beliefs = []
    if mode in ("first", "second"):
        parts.append(("belief", build_belief_prompt(ctx)))
        beliefs.append(BeliefReport("<first-order belief report>", "first"))
    if mode == "second":
        parts.append(("second_order", build_second_order_prompt(ctx)))
        beliefs.append(BeliefReport("<second-order belief report>", "second"))
    kept = top_k(score_actions(obs), k)
    parts.append(("plan", build_plan_eval_prompt(ctx, beliefs or None, kept)))
    return "\n\n".join(f"##### {name} prompt\n{bundle.render()}" for name, bundle in parts) + "\n"


def cmd_render_prompt(fixture: str, mode: str, locale: str, k: int) -> int:
    if fixture != "reference":
        raise InvalidInput(f"unknown fixture {fixture!r}; only 'reference' is available")
    if mode not in _MODE_ALIASES:
        raise InvalidInput(f"unknown mode {mode!r}; expected vanilla, 1st or 2nd")
    sys.stdout.write(render_prompts(_MODE_ALIASES[mode], locale, k))
    return EXIT_OK


# --------------------------------------------------------------------------
# argument handling


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, dest="base_seed", help="base seed")
    p.add_argument("--locale", choices=LOCALES)
    p.add_argument("--k", type=int, help="recommender top-k")
    p.add_argument("--level", dest="level_schedule", help="comma-separated level ranks, e.g. 2,3,J")
    p.add_argument("--live", action="store_true", default=None, help="allow real HTTP calls for language-model agents")
    p.add_argument("--parallel", type=int, help="games run concurrently")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="guandan", description="Guandan simulator and agent evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="play a match and write game logs")
    _add_common(sim)
    sim.add_argument("--agents", help=f"four comma-separated agent names from: {', '.join(AGENT_NAMES)}")
    sim.add_argument("--deals", type=int)

    ev = sub.add_parser("evaluate", help="run an evaluation protocol and write a report")
    _add_common(ev)
    ev.add_argument("--protocol", choices=("seeded", "swap"))
    ev.add_argument("--a", dest="team_a", help="team A agent")
    ev.add_argument("--b", dest="team_b", help="team B agent")
    ev.add_argument("--games", type=int)
    ev.add_argument("--logs", action="store_true", help="also write games.jsonl")

    an = sub.add_parser("analyze", help="histogram legal-list lengths and chosen indices")
    an.add_argument("logs", help="a .jsonl log file or a directory of them")
    an.add_argument("--out", default=None, help="CSV directory (default: the logs directory)")
    an.add_argument("--seats", help="comma-separated seats to count (default: all)")

    rp = sub.add_parser("render-prompt", help="print the prompts for the reference position")
    rp.add_argument("--fixture", default="reference")
    rp.add_argument("--mode", default="vanilla", help="vanilla, 1st or 2nd")
    rp.add_argument("--locale", choices=LOCALES, default="zh")
    rp.add_argument("--k", type=int, default=DEFAULT_K)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InvalidInput(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InvalidInput("config must be a JSON object")
    try:
        cfg = RunConfig.from_mapping(data)
    except TypeError as exc:
        raise InvalidInput(f"bad config: {exc}") from None
    overrides: dict[str, Any] = {}
    for name in ("out", "base_seed", "locale", "live", "parallel", "deals", "protocol", "team_a", "team_b", "games"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "agents", None):
        overrides["agents"] = [a.strip() for a in args.agents.split(",")]
    if getattr(args, "level_schedule", None):
        overrides["level_schedule"] = [s.strip() for s in args.level_schedule.split(",")]
    if getattr(args, "k", None) is not None:
        overrides["recommender"] = {**cfg.recommender, "k": args.k}
    return replace(cfg, **overrides).validate()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "simulate":
            return cmd_simulate(load_config(args))
        if args.command == "evaluate":
            return cmd_evaluate(load_config(args), write_logs=args.logs)
        if args.command == "analyze":
            seats = None
            if args.seats:
                try:
                    seats = [int(s) for s in args.seats.split(",")]
                except ValueError:
                    raise InvalidInput(f"bad --seats value {args.seats!r}") from None
            out = args.out or (args.logs if Path(args.logs).is_dir() else str(Path(args.logs).parent))
            return cmd_analyze(args.logs, out, seats)
        if args.command == "render-prompt":
            return cmd_render_prompt(args.fixture, args.mode, args.locale, args.k)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuandanError, OSError, RuntimeError, ValueError) as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
