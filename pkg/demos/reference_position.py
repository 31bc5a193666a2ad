"""Walk through the reference position: hand, legal moves, recommender scores and prompts.

    python3 demos/reference_position.py [en|zh]
"""

from __future__ import annotations

import sys

from guandan.fixtures import reference_observation
from guandan.interpreter import TemplateStore, card_name
from guandan.recommender import describe, score_actions, top_k
from guandan.tom import BeliefReport, build_belief_prompt, build_plan_eval_prompt, make_context


def main(locale: str = "en") -> None:
    obs = reference_observation()
    store = TemplateStore(locale)
    print("hand:", ", ".join(card_name(c, store) for c in obs.hand))
    print(f"level {obs.level.symbol}; seat {obs.last_play[0]} played {obs.last_play[1].text}")
    print()

    print("legal actions with heuristic scores:")
    kept = top_k(score_actions(obs))
    for line in describe(kept):
        print("  ", line)
    print()

    ctx = make_context(obs, locale)
    print(build_belief_prompt(ctx).render())
    print()
    # a stand-in for what the model would have written about the other players
    belief = BeliefReport("(the model's reading of the other three players goes here)", "first")
    print(build_plan_eval_prompt(ctx, belief, kept).messages[1].content)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "en")
