"""Sign of gamma_n for n = 10^m from the phase formula.

    python scripts/sign_table.py                     # 10^10 .. 10^10000
    python scripts/sign_table.py --n 10^100000 --csv signs.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

from stieltjes.asymptotics import sign_gamma

DEFAULT = ["10^10", "10^100", "10^1000", "10^10000"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", nargs="+", default=DEFAULT, help="n values (decimal, 1eM or 10^M)")
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args(argv)

    rows = []
    for spec in args.n:
        t0 = time.perf_counter()
        r = sign_gamma(spec)
        d = r.as_dict()
        rows.append([spec, r.sign, r.certified, d["im_phase_mod_2pi"][:20], r.im_mod_2pi_digits, f"{time.perf_counter() - t0:.2f}"])
        print(f"{spec:>12}  sign {r.sign:+d}  Im phi mod 2pi = {d['im_phase_mod_2pi'][:12]:<14} "
              f"stable digits {r.im_mod_2pi_digits:<6} {rows[-1][-1]} s", flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "sign", "certified", "im_phase_mod_2pi", "stable_digits", "seconds"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
