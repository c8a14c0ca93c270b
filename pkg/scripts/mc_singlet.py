"""Monte Carlo check of singlet statistics over many seeds.

Counts how many seeds keep both (-) frequencies within 5 sigma of 1/2 and the
chi-square statistic below the 99.9% quantile.
"""

import argparse
import math

from scipy import stats

from spinpair import BasisSpec, probs_minus, singlet
from spinpair.sampler import chi_square, sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--chi", type=float, default=1.0)
    args = ap.parse_args()

    j = probs_minus(singlet(), BasisSpec(args.chi, 0.0))
    bound = 5 * math.sqrt(0.25 / args.n)
    limit = stats.chi2.ppf(0.999, 1)
    good = 0
    for seed in range(args.seeds):
        c = sample(j, args.n, seed)
        stat, _ = chi_square(c, j)
        ok = stat < limit and all(abs(c.frequencies[k] - 0.5) <= bound for k in (1, 2))
        good += ok
    print(f"{good}/{args.seeds} seeds within 5 sigma and chi2 < {limit:.2f}")


if __name__ == "__main__":
    main()
