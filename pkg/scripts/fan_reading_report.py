#!/usr/bin/env python3
"""Compare the two readings of the fan-tightness conclusion on a pair corpus.

The condition's conclusion closes a pick-set; the set being closed can be
read as the whole pick-set ("a") or as the union of its per-member slices
("union").  This script runs both readings over all ordered pairs of
homeomorphism representatives with up to --max-n points and reports any
pair where the verdicts differ.
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from openpoint.enumeration import enumerate_unlabeled
from openpoint.game import solve_game
from openpoint.products import fan_tightness_check


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--pool", choices=["boxes", "all"], default="boxes")
    args = parser.parse_args()

    reps = [s for n in range(1, args.max_n + 1) for s in enumerate_unlabeled(n)]
    disagreements = 0
    for x, y in itertools.product(reps, repeat=2):
        kappa = max(2, solve_game(x).gd, solve_game(y).gd)
        a = fan_tightness_check([x, y], kappa, args.pool, reading="a")
        union = fan_tightness_check([x, y], kappa, args.pool, reading="union")
        rec = {
            "pair": [x.name, y.name],
            "kappa": kappa,
            "reading_a": a.status.value,
            "reading_union": union.status.value,
        }
        print(json.dumps(rec, separators=(",", ":")))
        disagreements += a.status != union.status
    print(f"{len(reps) ** 2} pairs, {disagreements} reading disagreements",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
