"""Rule agent against random play, under both evaluation protocols.

    python3 demos/baselines.py [games]
"""

from __future__ import annotations

import sys

from guandan.harness import run_position_swap, run_seeded_series


def main(games: int = 200) -> None:
    seeded = run_seeded_series("rule", "random", games, base_seed=7)
    print(seeded.to_table())
    print()
    swap = run_position_swap("rule", "random", games, base_seed=7)
    print(swap.to_table())
    print()
    # identical agents on both sides: the mirrored halves cancel exactly
    mirror = run_position_swap("rule", "rule", games, base_seed=7)
    print(mirror.to_table())


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 200)
