"""Closed forms vs brute-force projection, with timing."""

import argparse
import time

from spinpair.oracle import verify_closed_forms


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    summary = verify_closed_forms(args.trials, args.seed, workers=args.workers)
    elapsed = time.perf_counter() - t0
    for family, dev in summary.max_deviation.items():
        print(f"{family:>7}  {dev:.3e}")
    print(f"{'passed' if summary.passed else 'FAILED'} in {elapsed:.2f} s")
    raise SystemExit(0 if summary.passed else 1)


if __name__ == "__main__":
    main()
