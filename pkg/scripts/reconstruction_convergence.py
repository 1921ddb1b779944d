#!/usr/bin/env python3
"""Step-count convergence of the inconsistency-driven reconstruction.

Integrates the decomposed dI/dt back into (I, V) at doubling step counts
and prints the worst relative value error with the observed order between
consecutive rows (classical fourth-order behavior gives ratios near 16).
"""

import argparse
import math
import sys

from tempodisc import ModelSpec, TimePerception, reconstruct_from_inconsistency

CELLS = {
    "exp": ModelSpec(100.0, 0.2, 0.0),
    "hyp": ModelSpec(100.0, 0.1, 1.0),
    "unified": ModelSpec(100.0, 0.3, 0.8, TimePerception(s=0.5, a=1.0, b=0.5)),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cell", default="hyp", choices=sorted(CELLS))
    parser.add_argument("--t1", type=float, default=10.0)
    parser.add_argument("--min-steps", type=int, default=25)
    parser.add_argument("--doublings", type=int, default=8)
    args = parser.parse_args()

    spec = CELLS[args.cell]
    print("steps\tmax_value_error\tobserved_order")
    prev = None
    steps = args.min_steps
    for _ in range(args.doublings):
        err = reconstruct_from_inconsistency(spec, 0.0, args.t1, steps).max_value_error
        if prev is None or err == 0.0 or prev == 0.0:
            order = ""
        else:
            order = f"{math.log2(prev / err):.2f}"
        print(f"{steps}\t{err:.3e}\t{order}")
        prev = err
        steps *= 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
