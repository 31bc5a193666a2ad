"""Regenerate the prompt golden files from the reference position.

Run by hand after an intentional wording change, then review the diff:

    python3 tests/make_goldens.py
"""

from __future__ import annotations

from pathlib import Path

from guandan.fixtures import reference_observation
from guandan.interpreter import LOCALES
from guandan.recommender import score_actions, top_k
from guandan.tom import build_belief_prompt, build_plan_eval_prompt, build_second_order_prompt, make_context

GOLDEN_DIR = Path(__file__).parent / "golden"


def golden_texts(locale: str) -> dict[str, str]:
    obs = reference_observation()
    ctx = make_context(obs, locale)
    kept = top_k(score_actions(obs))
    return {
        "rules": ctx.rules.text,
        "observation": ctx.observation.text,
        "history": ctx.history.text,
        "belief_prompt": build_belief_prompt(ctx).render(),
        "second_order_prompt": build_second_order_prompt(ctx).render(),
        "plan_prompt": build_plan_eval_prompt(ctx, None, kept).render(),
    }


def main() -> None:
    for locale in LOCALES:
        out = GOLDEN_DIR / locale
        out.mkdir(parents=True, exist_ok=True)
        for name, text in golden_texts(locale).items():
            (out / f"{name}.txt").write_text(text + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
