"""Run the acceptance suite and print one PASS/FAIL line per criterion.

    python scripts/run_acceptance.py            # default criteria
    python scripts/run_acceptance.py --slow     # include the long checks
"""
from __future__ import annotations

import argparse
import re
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
LINE = re.compile(r"test_acceptance\.py::(\S+)\s+(PASSED|FAILED|SKIPPED|ERROR|XFAIL|XPASS)")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--slow", action="store_true", help="also run the long checks")
    ap.add_argument("-k", dest="select", help="pytest -k expression")
    args = ap.parse_args(argv)

    cmd = [sys.executable, "-m", "pytest", "-v", "-p", "no:cacheprovider", str(ROOT / "tests" / "test_acceptance.py")]
    if args.slow:
        cmd.append("--runslow")
    if args.select:
        cmd += ["-k", args.select]
    proc = subprocess.run(cmd, cwd=ROOT, capture_output=True, text=True)
    failed = 0
    for m in LINE.finditer(proc.stdout):
        name, status = m.groups()
        label = {"PASSED": "PASS", "FAILED": "FAIL", "ERROR": "FAIL"}.get(status, status)
        failed += label == "FAIL"
        print(f"{label:<7} {name}")
    if failed:
        print("\nfailure details:")
        for line in proc.stdout.splitlines():
            if line.startswith("E ") or line.startswith("FAILED"):
                print(line)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
