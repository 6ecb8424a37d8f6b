"""How good is the closed-form saddle for a_k(eps)?

For each k: |omega'| at the closed-form point, relative displacement to the
Newton-refined root, and the a_k ratio (asymptotic/exact) from both points.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import mpmath
from mpmath import mp

from stieltjes.asymptotics import a_k_asymptotic
from stieltjes.finite_diff import a_coefficients
from stieltjes.mp_core import PrecisionContext
from stieltjes.saddle import displacement, saddle_closed


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[10, 25, 50, 100, 200])
    ap.add_argument("--epsilon", default="1/32")
    args = ap.parse_args(argv)

    eps = Fraction(args.epsilon)
    ctx = PrecisionContext(30)
    k_top = max(args.k)
    # a_k shrinks like eps^k k-ish; the guard keeps relative accuracy at k_top
    table = a_coefficients(eps, k_top, PrecisionContext(20, guard=int(2.2 * k_top) + 60)).values
    print(f"{'k':>5} {'|omega1| closed':>16} {'displacement':>14} {'ratio closed':>14} {'ratio refined':>14}")
    for k in args.k:
        res = saddle_closed(k, eps, "plus", ctx).residual
        disp = displacement(k, eps, ctx)
        with mp.workdps(30):
            rc = a_k_asymptotic(k, eps, ctx) / table[k]
            rr = a_k_asymptotic(k, eps, ctx, saddle="refined") / table[k]
            print(f"{k:>5} {mpmath.nstr(res, 5):>16} {mpmath.nstr(disp, 5):>14} "
                  f"{mpmath.nstr(rc, 8):>14} {mpmath.nstr(rr, 8):>14}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
