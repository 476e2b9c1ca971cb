#!/usr/bin/env python3
"""Survey the invariant chain over every small space and report the findings.

Emits one NDJSON record per labeled topology (n up to --max-n) with the full
d, delta, gd, pi, w, t chain, the game-variant values, and the exact-force
set, then prints summary lines: whether d = delta = gd = pi collapsed
everywhere, and whether the multi-point variant ever gained anything.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from openpoint.enumeration import enumerate_labeled
from openpoint.game import GameVariant, exact_force_set, solve_game
from openpoint.invariants import invariant_report


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    collapsed_everywhere = True
    multi_gained = []
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for n in range(1, args.max_n + 1):
            for space in enumerate_labeled(n):
                rep = invariant_report(space)
                gd_free = solve_game(space, GameVariant.FREE).gd
                gd_multi = solve_game(space, GameVariant.MULTI_POINT).gd
                rec = rep.as_record(space)
                rec["gd_free"] = gd_free
                rec["gd_multi"] = gd_multi
                rec["exact_force"] = sorted(exact_force_set(space))
                sink.write(json.dumps(rec, separators=(",", ":")) + "\n")
                collapsed_everywhere &= rep.collapsed
                if gd_multi != gd_free:
                    multi_gained.append(space.name)
    finally:
        if args.out:
            sink.close()
    print(f"d = delta = gd = pi on every space: {collapsed_everywhere}", file=sys.stderr)
    print(f"multi-point picks ever changed gd: {bool(multi_gained)} {multi_gained[:5]}",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
