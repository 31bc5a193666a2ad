"""How many legal actions a player faces, over 100 random-agent games.

    python3 demos/action_distribution.py [out_dir]
"""

from __future__ import annotations

import sys

from guandan.harness import collect_action_stats, run_seeded_series


def main(out_dir: str = "demo_out") -> None:
    report = run_seeded_series("random", "random", 100, base_seed=600, keep_logs=True)
    stats = collect_action_stats(report.logs)
    print(f"{stats.decisions} decisions, largest legal list {stats.max_length}")
    buckets = [(1, 1), (2, 5), (6, 20), (21, 79), (80, 10_000)]
    for lo, hi in buckets:
        n = sum(v for k, v in stats.lengths.items() if lo <= k <= hi)
        label = f"{lo}+" if hi == 10_000 else (f"{lo}" if lo == hi else f"{lo}-{hi}")
        print(f"{label:>7} {n:7d} {'#' * max(1 if n else 0, round(60 * n / stats.decisions))}")
    for path in stats.write_csv(out_dir):
        print("wrote", path)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
