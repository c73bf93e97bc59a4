"""Run the worked-example catalog and print a one-line summary per example."""
import argparse
import json
import logging
from collections import Counter

from hessalg import catalog as cat
from hessalg.hessdual import DEFAULT_SEED


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    ap.add_argument("--only", type=int, nargs="*", default=None, help="example indices 1..6")
    ap.add_argument("--json", default=None, help="also write the raw results here")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    results = cat.run_catalog(seed=args.seed, only=set(args.only) if args.only else None)
    for r in results:
        counts = Counter(c["status"] for c in r["checks"])
        summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
        print(f"ex.{r['example']} {r['title']}: {summary}; {len(r['discrepancies'])} discrepancies")
        for d in r["discrepancies"]:
            print(f"    {d}")
    failures = cat.tool_failures(results)
    for f in failures:
        print(f"TOOL FAILURE {f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, sort_keys=True, indent=2)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
