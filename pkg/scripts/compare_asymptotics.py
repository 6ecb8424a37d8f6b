"""Exact gamma_n against the saddle-point formula.

Prints sign agreement and |ratio - 1| statistics, optionally writes one CSV
row per n.  The defaults cover the 20..200 window; large n need an explicit
--k-max (the default 4n is far more than the tail needs) and a lot of time:

    python scripts/compare_asymptotics.py --n 20..200
    python scripts/compare_asymptotics.py --n 3000,3100,3300 --k-max 4200 --csv big.csv
"""
from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from fractions import Fraction

import mpmath
from mpmath import mp

from stieltjes.asymptotics import gamma_asymptotic, gamma_asymptotic_refined
from stieltjes.cli import parse_range
from stieltjes.finite_diff import gamma_exact_many
from stieltjes.mp_core import PrecisionContext


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", default="20..200")
    ap.add_argument("--epsilon", default="1/32")
    ap.add_argument("--k-max", type=int)
    ap.add_argument("--digits", type=int, default=20)
    ap.add_argument("--csv")
    args = ap.parse_args(argv)

    ns = parse_range(args.n)
    t0 = time.perf_counter()
    exact = gamma_exact_many(ns, Fraction(args.epsilon), args.k_max, PrecisionContext(args.digits))
    print(f"exact values: {time.perf_counter() - t0:.1f} s", flush=True)

    rows, mismatches, off = [], [], {}
    ctx = PrecisionContext(30)
    for r in exact:
        if r.n < 1:
            continue
        full = gamma_asymptotic(r.n, ctx)
        ref = gamma_asymptotic_refined(r.n, ctx)
        with mp.workdps(30):
            q_full, q_ref = full.value / r.value, ref.value / r.value
        if full.sign != mpmath.sign(r.value):
            mismatches.append(r.n)
        off[r.n] = float(abs(q_full - 1))
        rows.append([r.n, mpmath.nstr(r.value, 15), r.digits_certified, mpmath.nstr(q_full, 12), mpmath.nstr(q_ref, 12)])

    print(f"sign mismatches: {mismatches or 'none'}")
    worst = max(off, key=off.get)
    print(f"worst |ratio-1|: {off[worst]:.3e} at n={worst}")
    for lo, hi in ((50, 100), (150, 200)):
        window = [v for n, v in off.items() if lo <= n <= hi]
        if window:
            print(f"mean |ratio-1| on [{lo},{hi}]: {statistics.fmean(window):.3e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "exact", "digits_certified", "ratio_full", "ratio_refined"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
