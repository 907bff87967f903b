"""Erdos-Renyi sweep: greedy vs annealed chain across n and the Star probability.

Writes the per-trial CSV and a summary with the monotonicity and gap checks.
"""

import argparse
import time
from pathlib import Path

from sscmod.bench import BenchConfig, format_summary, run_bench, summarize, trend_report, write_csv
from sscmod.mcmc import McmcParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="5,10,15")
    ap.add_argument("--m", default="n", help="comma list; 'n' means m = n")
    ap.add_argument("--p-star", default="0.1,0.45,0.8")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rmax", type=int, default=50_000)
    ap.add_argument("--alpha", type=float, default=0.1, help="cooling factor")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    config = BenchConfig(
        n_values=tuple(int(x) for x in args.n.split(",")),
        m_values=tuple(0 if x == "n" else int(x) for x in args.m.split(",")),
        p_star=tuple(float(x) for x in args.p_star.split(",")),
        trials=args.trials, seed=args.seed, mcmc=McmcParams(r_max=args.rmax, alpha=args.alpha),
        workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tag = f"er_m{args.m.replace(',', '-')}_t{args.trials}_s{args.seed}_a{args.alpha:g}"
    start = time.monotonic()
    records = []
    with open(out / f"{tag}.csv", "w", newline="\n") as fh:
        write_csv((records.append(r) or r for r in run_bench(config)), fh)
    ok, report = trend_report(records)
    text = format_summary(summarize(records)) + "\n\n" + report + "\n"
    (out / f"{tag}_summary.txt").write_text(text)
    print(text)
    print(f"elapsed {time.monotonic() - start:.1f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
