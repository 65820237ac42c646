#!/usr/bin/env python3
"""Run the solver over a generated corpus and write one JSON line per
instance (family, size, solution size, cost data, notes).

Example:
  python3 scripts/run_corpus.py --out corpus.jsonl --max-n 30 --seeds 5
"""

import argparse
import json
import sys

from twoec.generate import cycle_ring, glued_cliques, random_2ec
from twoec.oracle import verify_2ecss
from twoec.pipeline import PipelineConfig, run_pipeline


def instances(max_n, seeds):
    for n in range(6, max_n + 1):
        for seed in range(seeds):
            yield f"random-2ec/n{n}/s{seed}", random_2ec(n, None, seed * 977 + n)
    for k in range(2, 7):
        for cyclen in (4, 5, 6):
            for seed in range(seeds):
                if k * cyclen <= max_n:
                    yield f"cycle-ring/{k}x{cyclen}/s{seed}", \
                        cycle_ring(k, cyclen, seed)
    for a in range(8, 13):
        if 2 * a - 3 <= max_n:
            yield f"glued-cliques/{a}-{a}-3", glued_cliques(a, a, 3)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="-", help="output JSONL path ('-' = stdout)")
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--oracle", choices=["off", "auto", "force"], default="auto")
    ap.add_argument("--enum-budget", type=int, default=12)
    args = ap.parse_args()

    cfg = PipelineConfig(oracle_mode=args.oracle,
                         enumeration_budget=args.enum_budget, timings=True)
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    count = failures = 0
    with out:
        for name, g in instances(args.max_n, args.seeds):
            count += 1
            row = {"name": name, "n": g.n, "m": g.m}
            try:
                rep = run_pipeline(g, cfg)
            except Exception as exc:
                failures += 1
                row["error"] = repr(exc)
            else:
                row.update(
                    size=rep["solution"]["size"],
                    certified=rep["certified"],
                    ratio=rep.get("ratio"),
                    opt=(rep.get("oracle") or {}).get("opt"),
                    wall=rep.get("wall_seconds"),
                    feasible=verify_2ecss(g, set(rep["solution"]["edges"])),
                    notes=rep["notes"],
                )
            out.write(json.dumps(row, sort_keys=True) + "\n")
    print(f"{count} instances, {failures} failures", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
