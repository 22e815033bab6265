#!/usr/bin/env python3
"""Table of the scalar contradiction chain at selected even n, plus the worst row of a full scan."""
import argparse
import sys
import time

from smatrix.lemma_audit import contradiction_row, contradiction_scan, mean_interval, mean_sq_lower, \
    uniform_alpha_lower


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--to", type=int, default=100_000, help="upper end of the full scan")
    p.add_argument("--workers", type=int, default=None)
    args = p.parse_args(argv)

    lo, hi = mean_interval()
    print(f"mean of squares >= {mean_sq_lower()}  mean in [{lo}, {hi}]  uniform alpha >= {float(uniform_alpha_lower()):.6f}")
    print(f"{'n':>8} {'alpha_lower':>12} {'l1_upper':>10} {'margin':>10}  ok")
    for n in (1000, 1002, 2000, 5000, 10_000, 100_000, 10**6):
        r = contradiction_row(n)
        print(f"{n:>8} {r.alpha_lower:12.6f} {r.l1_upper:10.6f} {r.alpha_lower - 1 / 500 - r.l1_upper:10.6f}  "
              f"{r.contradiction}")

    t0 = time.perf_counter()
    rows = contradiction_scan(1000, args.to, workers=args.workers)
    worst = min(rows, key=lambda r: r.alpha_lower - r.l1_upper)
    bad = [r.n for r in rows if not r.contradiction]
    print(f"scan 1000..{args.to}: {len(rows)} rows in {time.perf_counter() - t0:.2f}s, "
          f"tightest at n={worst.n} (margin {worst.alpha_lower - 1 / 500 - worst.l1_upper:.6f}), failures: {bad or 'none'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
