"""Print the P+ fringe and the A marginal as alpha runs over a period.

    python scripts/fringe_sweep.py --p 0.6 --chi 1.2 --steps 13
"""

import argparse
import math

import numpy as np

from spinpair import BasisSpec, joint_probs, make_pair, pair_visibility


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kind", choices=["minus", "plus"], default="minus")
    ap.add_argument("--p", type=float, default=1 / math.sqrt(2))
    ap.add_argument("--chi", type=float, default=math.pi / 2)
    ap.add_argument("--delta", type=float, default=0.0)
    ap.add_argument("--steps", type=int, default=25)
    args = ap.parse_args()

    q = math.sqrt(1 - args.p**2)
    e = BasisSpec(args.chi, args.delta)
    print(f"{'alpha':>8} {'P+':>10} {'P-':>10} {'P_A(e)':>10}")
    fringe = []
    for alpha in np.linspace(0, 2 * math.pi, args.steps):
        j = joint_probs(make_pair(args.kind, args.p, q, alpha), e)
        fringe.append(j.p_plus)
        print(f"{alpha:8.4f} {j.p_plus:10.6f} {j.p_minus:10.6f} {j.marginal_a[0]:10.6f}")
    v = pair_visibility(make_pair(args.kind, args.p, q), e)
    print(f"half swing {(max(fringe) - min(fringe)) / 2:.6f}, predicted V {v:.6f}")


if __name__ == "__main__":
    main()
