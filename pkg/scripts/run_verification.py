#!/usr/bin/env python3
"""Run the exhaustive verification suite and write its NDJSON report.

Usage: python scripts/run_verification.py [--n 4] [--checks all] [--out report.ndjson]
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from openpoint.enumeration import verify_suite


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--checks", default="all")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    started = time.time()
    ok, records = verify_suite(args.n, checks=args.checks, seed=args.seed, jobs=args.jobs)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for rec in records:
            sink.write(json.dumps(rec, separators=(",", ":")) + "\n")
    finally:
        if args.out:
            sink.close()
    passed = sum(1 for r in records if r["status"] == "pass")
    print(f"{passed}/{len(records)} checks passed in {time.time() - started:.1f}s",
          file=sys.stderr)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
