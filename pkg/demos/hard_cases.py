"""Re-verify the 42 systems the automated census for M = 7 could not settle.

Every row is checked twice: by the finite-field rank oracle and by the
toolbox (game, Cremona, overload, degeneration, homogeneous results).

Run: python3 demos/hard_cases.py [--no-oracle]
"""
from __future__ import annotations

import argparse
import time
from collections import Counter

from hhverify.table2 import verify_table2


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--no-oracle", action="store_true")
    args = ap.parse_args()

    t = time.perf_counter()
    reports = verify_table2(run_oracle=not args.no_oracle)
    for r in reports:
        flag = "ok " if r.ok else "BAD"
        dim = r.oracle["dim"] if r.oracle else "-"
        print(f"{flag} {str(r.row.sys):40s} {r.row.reason:38s} oracle {dim!s:>3}  toolbox {r.toolbox['method']}")
        for note in r.notes:
            print(f"      {note}")
    methods = Counter(r.toolbox["method"] for r in reports)
    print(f"\n{sum(r.ok for r in reports)}/{len(reports)} rows verified in {time.perf_counter() - t:.1f}s")
    print("toolbox methods:", dict(sorted(methods.items())))


if __name__ == "__main__":
    main()
