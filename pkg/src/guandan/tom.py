"""The language-model agent: prompt assembly, backends, answer parsing and the agent loop.

Three planning modes share one plan-and-evaluate prompt:

* ``vanilla`` asks for a plan directly (one backend call),
* ``first`` first asks what the other players believe and hold (two calls),
* ``second`` also asks how the others see this seat (three calls).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping, NamedTuple, Protocol, Sequence

import httpx

from .agents import Observation
from .combos import Action
from .errors import BackendError, InvalidInput
from .interpreter import (
    DEFAULT_LOCALE,
    RenderedHistory,
    RenderedObservation,
    RuleText,
    TemplateStore,
    get_store,
    raw_state_json,
    render_action_lines,
    render_history,
    render_observation,
    render_rules,
)
from .recommender import DEFAULT_K, ScoredAction, Scorer, score_actions, top_k

log = logging.getLogger(__name__)

__all__ = [
    "MODES",
    "DEFAULT_WINDOW",
    "Message",
    "PromptBundle",
    "BeliefReport",
    "PromptContext",
    "BackendParams",
    "LlmBackend",
    "MockBackend",
    "HttpBackend",
    "make_context",
    "build_belief_prompt",
    "build_second_order_prompt",
    "build_plan_eval_prompt",
    "build_conversion_prompt",
    "parse_action_choice",
    "ParsedChoice",
    "TomAgent",
    "tom_agent",
]

MODES = ("vanilla", "first", "second")
DEFAULT_WINDOW = 8


@dataclass(frozen=True)
class Message:
    role: str
    content: str


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple[Message, ...]

    def __post_init__(self) -> None:
        for m in self.messages:
            if m.role not in ("system", "user"):
                raise InvalidInput(f"unsupported message role {m.role!r}")

    def to_payload(self) -> list[dict[str, str]]:
        return [{"role": m.role, "content": m.content} for m in self.messages]

    def digest(self) -> str:
        blob = json.dumps(self.to_payload(), ensure_ascii=False, separators=(",", ":")).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def render(self) -> str:
        """Plain-text dump for humans."""
        return "\n\n".join(f"=== {m.role} ===\n{m.content}" for m in self.messages)


@dataclass(frozen=True)
class BeliefReport:
    text: str
    order: str  # "first" or "second"


@dataclass(frozen=True)
class PromptContext:
    rules: RuleText
    observation: RenderedObservation
    history: RenderedHistory
    locale: str


def make_context(
    observation: Observation,
    locale: str = DEFAULT_LOCALE,
    window: int = DEFAULT_WINDOW,
    store: TemplateStore | None = None,
) -> PromptContext:
    """Render rules, the position and the last ``window`` history events."""
    if window < 0:
        raise InvalidInput("history window must be non-negative")
    st = get_store(locale, store)
    recent = observation.history[-window:] if window else ()
    return PromptContext(
        rules=render_rules(observation.level, locale, st),
        observation=render_observation(observation, locale, st),
        history=render_history(recent, observation.seat, locale, st),
        locale=locale,
    )


def _bundle(ctx: PromptContext, task: str) -> PromptBundle:
    user = "\n\n".join([ctx.observation.text, ctx.history.text, task])
    return PromptBundle((Message("system", ctx.rules.text), Message("user", user)))


def build_belief_prompt(ctx: PromptContext, locale: str | None = None, store: TemplateStore | None = None) -> PromptBundle:
    st = get_store(locale or ctx.locale, store)
    return _bundle(ctx, st.render("belief"))


def build_second_order_prompt(
    ctx: PromptContext, locale: str | None = None, store: TemplateStore | None = None
) -> PromptBundle:
    st = get_store(locale or ctx.locale, store)
    return _bundle(ctx, st.render("second_order"))


def build_conversion_prompt(
    observation: Observation, locale: str = DEFAULT_LOCALE, store: TemplateStore | None = None
) -> PromptBundle:
    """Ask the model to turn the raw state into the numbered situation text (optional mode)."""
    st = get_store(locale, store)
    rules = render_rules(observation.level, locale, st)
    task = st.render("observation", "convert", state=raw_state_json(observation))
    return PromptBundle((Message("system", rules.text), Message("user", task)))


def build_plan_eval_prompt(
    ctx: PromptContext,
    belief: BeliefReport | Sequence[BeliefReport] | None,
    topk: Sequence[ScoredAction] | Sequence[Action],
    locale: str | None = None,
    store: TemplateStore | None = None,
) -> PromptBundle:
    """The merged plan-and-evaluate prompt; without a belief it is the vanilla prompt."""
    if not topk:
        raise InvalidInput("the plan prompt needs at least one action")
    loc = locale or ctx.locale
    st = get_store(loc, store)
    actions = [s.action if isinstance(s, ScoredAction) else s for s in topk]
    if belief is None:
        reports: list[BeliefReport] = []
    elif isinstance(belief, BeliefReport):
        reports = [belief]
    else:
        reports = list(belief)
    block = ""
    if reports:
        block = st.render("plan", "belief", belief="\n\n".join(r.text.strip() for r in reports)) + "\n\n"
    task = st.render("plan", belief_block=block, actions=render_action_lines(actions, loc, st))
    return _bundle(ctx, task)


# --------------------------------------------------------------------------
# answer parsing


class ParsedChoice(NamedTuple):
    index: int
    fallback: bool


_MARKED = re.compile(r"(?:方案|索引|plan|index)\s*(?:[:：#]|is|为|是)?\s*(\d+)", re.IGNORECASE)
_BARE = re.compile(r"(?<!\d)(\d+)(?!\d)")


def parse_action_choice(text: str, legal: Sequence[Any] | int) -> ParsedChoice:
    """Pull the chosen index out of a free-text answer.

    The last in-range number right after a selection marker wins; failing
    that, the last in-range bare number; failing that, index 0 with the
    fallback flag set.
    """
    n = legal if isinstance(legal, int) else len(legal)
    if n < 1:
        raise InvalidInput("cannot choose from an empty action list")
    for pattern in (_MARKED, _BARE):
        hits = [int(m.group(1)) for m in pattern.finditer(text or "")]
        hits = [h for h in hits if 0 <= h < n]
        if hits:
            return ParsedChoice(hits[-1], False)
    return ParsedChoice(0, True)


# --------------------------------------------------------------------------
# backends


@dataclass(frozen=True)
class BackendParams:
    model_name: str = "mock"
    temperature: float = 0.0
    max_output: int = 2048
    timeout: float = 60.0


class LlmBackend(Protocol):
    def complete(self, bundle: PromptBundle, params: BackendParams) -> str: ...


class MockBackend:
    """Replays canned answers keyed by the prompt digest.

    Prompts without a canned answer get ``default``, which may be a string or
    a function of the bundle.  Every call is appended to ``calls``.
    """

    def __init__(
        self,
        responses: Mapping[str, str] | None = None,
        default: str | Callable[[PromptBundle], str] = "Chosen plan: 0",
    ) -> None:
        self.responses = dict(responses or {})
        self.default = default
        self.calls: list[PromptBundle] = []
        self._lock = threading.Lock()

    def complete(self, bundle: PromptBundle, params: BackendParams) -> str:
        with self._lock:
            self.calls.append(bundle)
        answer = self.responses.get(bundle.digest())
        if answer is None:
            answer = self.default(bundle) if callable(self.default) else self.default
        return answer


class HttpBackend:
    """Chat-completion client over HTTP with bounded retries and request spacing.

    Safe to share between games: requests are spaced at least
    ``min_interval`` seconds apart under a lock.
    """

    RETRY_STATUS = frozenset({408, 409, 429, 500, 502, 503, 504})

    def __init__(
        self,
        base_url: str,
        api_key_env: str = "OPENAI_API_KEY",
        retries: int = 3,
        backoff: float = 1.0,
        min_interval: float = 0.0,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if retries < 0:
            raise InvalidInput("retries must be non-negative")
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.retries = retries
        self.backoff = backoff
        self.min_interval = min_interval
        self.sleep = sleep
        self._client = httpx.Client(transport=transport)
        self._lock = threading.Lock()
        self._last_request = 0.0

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _wait_turn(self) -> None:
        with self._lock:
            gap = self.min_interval - (time.monotonic() - self._last_request)
            if gap > 0:
                self.sleep(gap)
            self._last_request = time.monotonic()

    def complete(self, bundle: PromptBundle, params: BackendParams) -> str:
        body = {
            "model": params.model_name,
            "messages": bundle.to_payload(),
            "temperature": params.temperature,
            "max_tokens": params.max_output,
        }
        url = f"{self.base_url}/chat/completions"
        last_error = "no attempt made"
        for attempt in range(self.retries + 1):
            if attempt:
                self.sleep(self.backoff * 2 ** (attempt - 1))
            self._wait_turn()
            try:
                resp = self._client.post(url, json=body, headers=self._headers(), timeout=params.timeout)
            except httpx.HTTPError as exc:
                last_error = f"{type(exc).__name__}: {exc}"
                log.warning("backend attempt %d failed: %s", attempt + 1, last_error)
                continue
            if resp.status_code in self.RETRY_STATUS:
                last_error = f"HTTP {resp.status_code}"
                log.warning("backend attempt %d got %s", attempt + 1, last_error)
                continue
            if resp.status_code >= 400:
                raise BackendError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"] or ""
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise BackendError(f"malformed completion response: {exc}") from exc
        raise BackendError(f"backend failed after {self.retries + 1} attempts: {last_error}")


# --------------------------------------------------------------------------
# the agent


@dataclass
class TomAgent:
    """Language-model agent; see the module docstring for the three modes."""

    mode: str
    backend: Any
    k: int = DEFAULT_K
    locale: str = DEFAULT_LOCALE
    params: BackendParams = field(default_factory=BackendParams)
    window: int = DEFAULT_WINDOW
    scorer: Scorer | None = None
    store: TemplateStore | None = None
    llm_observation: bool = False
    decisions: list[dict[str, Any]] = field(default_factory=list)
    last_choice: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InvalidInput(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.k < 1:
            raise InvalidInput("k must be at least 1")
        get_store(self.locale, self.store)

    def _ask(self, bundle: PromptBundle, prompts: list, responses: list) -> str:
        prompts.append(bundle.to_payload())
        text = self.backend.complete(bundle, self.params)[: self.params.max_output]
        responses.append(text)
        return text

    def act(self, observation: Observation) -> Action:
        kept = top_k(score_actions(observation, self.scorer), self.k)
        actions = [s.action for s in kept]
        ctx = make_context(observation, self.locale, self.window, self.store)
        prompts: list[list[dict[str, str]]] = []
        responses: list[str] = []
        error = None
        try:
            if self.llm_observation:
                bundle = build_conversion_prompt(observation, self.locale, self.store)
                text = self._ask(bundle, prompts, responses)
                ctx = replace(ctx, observation=RenderedObservation(text, self.locale))
            beliefs = []
            if self.mode in ("first", "second"):
                text = self._ask(build_belief_prompt(ctx, store=self.store), prompts, responses)
                beliefs.append(BeliefReport(text, "first"))
            if self.mode == "second":
                text = self._ask(build_second_order_prompt(ctx, store=self.store), prompts, responses)
                beliefs.append(BeliefReport(text, "second"))
            plan = build_plan_eval_prompt(ctx, beliefs or None, kept, store=self.store)
            choice = parse_action_choice(self._ask(plan, prompts, responses), len(actions))
        except BackendError as exc:
            log.warning("seat %d falls back to the top recommendation: %s", observation.seat, exc)
            error = str(exc)
            choice = ParsedChoice(0, True)
        entry = {
            "deal": observation.deal_index,
            "step": observation.step,
            "seat": observation.seat,
            "mode": self.mode,
            "prompts": prompts,
            "responses": responses,
            "chosen_index": choice.index,
            "fallback": choice.fallback,
        }
        if error is not None:
            entry["error"] = error
        self.decisions.append(entry)
        self.last_choice = (choice.index, len(actions))
        return actions[choice.index]


def tom_agent(
    mode: str,
    backend: Any,
    recommender_k: int = DEFAULT_K,
    locale: str = DEFAULT_LOCALE,
    params: BackendParams | None = None,
    window: int = DEFAULT_WINDOW,
    llm_observation: bool = False,
) -> TomAgent:
    return TomAgent(
        mode, backend, recommender_k, locale, params or BackendParams(), window, llm_observation=llm_observation
    )


def write_decision_log(decisions: Sequence[Mapping[str, Any]], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in decisions:
            fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")
