#!/usr/bin/env python3
"""Sweep the impulsivity scale and report where preference reversal lives.

For a smaller-sooner vs larger-later pair, the crossing time exists only
inside a window of k: too shallow and the later reward is always
preferred, too steep and it never catches up before the sooner reward
arrives. Prints one CSV row per k.
"""

import argparse
import csv
import sys

from tempodisc import ModelSpec, NoCrossingError, ScheduledReward, crossing_time


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--smaller", default="7@5", help="AMOUNT@TIME")
    parser.add_argument("--larger", default="10@10", help="AMOUNT@TIME")
    parser.add_argument("--q", type=float, default=1.0, help="value deformation")
    parser.add_argument("--k-min", type=float, default=0.02)
    parser.add_argument("--k-max", type=float, default=0.30)
    parser.add_argument("--steps", type=int, default=29)
    args = parser.parse_args()

    def parse_reward(text):
        amount, at = text.split("@")
        return ScheduledReward(float(amount), float(at))

    smaller = parse_reward(args.smaller)
    larger = parse_reward(args.larger)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["k", "crossing_time"])
    for i in range(args.steps):
        k = args.k_min + (args.k_max - args.k_min) * i / (args.steps - 1)
        spec = ModelSpec(v0=1.0, k=k, q=args.q)
        try:
            t_cross = crossing_time(smaller, larger, spec)
            writer.writerow([f"{k:.6g}", f"{t_cross:.10g}"])
        except NoCrossingError:
            writer.writerow([f"{k:.6g}", "none"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
