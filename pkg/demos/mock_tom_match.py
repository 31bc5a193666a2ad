"""A short match with language-model agents on a scripted offline backend.

The backend answers belief prompts with a fixed note and plan prompts by
choosing the second recommendation whenever there is one, so the effect of
the planning step on play is visible without any network access.

    python3 demos/mock_tom_match.py
"""

from __future__ import annotations

from guandan.agents import random_agent
from guandan.cards import Rank
from guandan.engine import MatchConfig, run_match
from guandan.tom import MockBackend, PromptBundle, tom_agent


def scripted(bundle: PromptBundle) -> str:
    user = bundle.messages[-1].content
    if "Legal action index" not in user:
        return "The next opponent is short of pairs; my teammate looks strong in singles."
    return "Chosen plan: 1" if "Legal action index 1:" in user else "Chosen plan: 0"


def main() -> None:
    backend = MockBackend(default=scripted)
    agents = [
        tom_agent("second", backend, locale="en"),
        random_agent(1),
        tom_agent("first", backend, locale="en"),
        random_agent(3),
    ]
    result = run_match(MatchConfig(3, 21, (Rank.TWO, Rank.THREE, Rank.FOUR), agents))
    for i, deal in enumerate(result.deals):
        print(f"deal {i}: finish order {deal.finish_order}, points {deal.team_points}")
    print("totals:", result.totals)
    print(f"backend calls: {len(backend.calls)}")
    first = agents[0].decisions[0]
    print(f"seat 0 first decision used {len(first['prompts'])} prompts and chose index {first['chosen_index']}")


if __name__ == "__main__":
    main()
