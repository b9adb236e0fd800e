"""Run the verification suites and write the JSON summary.

    python3 scripts/run_verify.py --n-seeds 50 --out verify.json
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from qpath.verify import SUITES, VerifyConfig, run_suites


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-seeds", type=int, default=10)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--density", type=float, default=0.6)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--double-flows", type=int, default=200)
    ap.add_argument("--lemma-pairs", type=int, default=500)
    ap.add_argument("--only", action="append", choices=SUITES)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    cfg = VerifyConfig(seed=args.seed, n_seeds=args.n_seeds, m=args.m, n=args.n, density=args.density,
                       max_k=args.max_k, double_flows=args.double_flows, lemma_pairs=args.lemma_pairs,
                       only=tuple(args.only or ()))
    t0 = time.time()
    summary = run_suites(cfg)
    for name, s in summary["suites"].items():
        print(f"{name:11s} checked {s['checked']:6d}  failures {s['failures']}  {s['stats']}", file=sys.stderr)
    print(f"elapsed {time.time() - t0:.1f}s", file=sys.stderr)
    text = json.dumps(summary, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 1 if summary["failures"] else 0


if __name__ == "__main__":
    raise SystemExit(main())
