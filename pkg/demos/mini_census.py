"""Classify every candidate system with multiplicities at most M.

For M = 3 the degree range is d <= 12; the run takes seconds and ends with
an oracle spot check of the logged verdicts.

Run: python3 demos/mini_census.py [M] [--jobs N]
"""
from __future__ import annotations

import argparse
import tempfile
from pathlib import Path

from hhverify.pipeline import CensusFilter, census, oracle_spot_check, read_verdicts


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("M", type=int, nargs="?", default=3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    filt = CensusFilter(args.M)
    with tempfile.TemporaryDirectory() as tmp:
        rep = census(filt, jobs=args.jobs, out_dir=tmp)
        print(f"M={filt.M}, degrees 1..{filt.dMax}: {rep.total} systems in {rep.seconds:.1f}s")
        print(rep.breakdown_csv())
        for sys in rep.unknown[:20]:
            print("unknown:", sys)
        verdicts = read_verdicts(Path(tmp) / "verdicts.jsonl")
        bad = oracle_spot_check(verdicts, n=500)
        print(f"oracle spot check on {min(500, len(verdicts))} verdicts: {len(bad)} disagreements")


if __name__ == "__main__":
    main()
