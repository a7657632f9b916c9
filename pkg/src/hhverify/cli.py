"""Command-line entry point: ``hhverify analyze|census|tables|oracle``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .degeneration import D, table1_csv
from .game import Strategy, certifies_nonspecial, replay
from .linsys import LinearSystem
from .oracle import MERSENNE31, OracleConfig, dimension
from .pipeline import CensusFilter, Verdict, census, classify, filter_count_report, _settled
from .table2 import table2_csv, verify_table2


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _system(args: argparse.Namespace) -> LinearSystem:
    return LinearSystem(args.d, tuple(_ints(args.m)))


def _cmd_analyze(args: argparse.Namespace) -> int:
    sys_ = _system(args)
    out: dict
    if args.script:
        strat = Strategy.load(args.script)
        outcome = replay(sys_, strat)
        if certifies_nonspecial(sys_, outcome):
            v: Verdict = _settled(sys_, "Game", {"strategy": strat.to_json(), "emptyCells": outcome.emptyCells})
        else:
            v = classify(sys_)
        out = v.to_json()
        out["script"] = {
            "blockedAt": outcome.blockedAt,
            "emptyCells": outcome.emptyCells,
            "certifies": certifies_nonspecial(sys_, outcome),
        }
    else:
        out = classify(sys_).to_json()
    if args.oracle:
        out["oracle"] = dimension(sys_).to_json()
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_census(args: argparse.Namespace) -> int:
    filt = CensusFilter(args.M, args.d_max, requireCandidate=args.filter == "candidate")
    if args.count_only:
        for row in filter_count_report(args.M, sorted({filt.dMax, D(args.M)})):
            print(json.dumps(row, sort_keys=True))
        return 0
    rep = census(filt, jobs=args.jobs, checkpoint=args.checkpoint, out_dir=args.out, shard=args.shard, nshards=args.nshards)
    sys.stdout.write(rep.breakdown_csv())
    print(
        f"# {rep.total} systems in {rep.seconds:.1f}s, {len(rep.unknown)} unknown, "
        f"{len(rep.contradictions)} contradictions",
        file=sys.stderr,
    )
    return 1 if rep.contradictions else 0


def _cmd_tables(args: argparse.Namespace) -> int:
    if args.which == 1:
        sys.stdout.write(table1_csv())
        return 0
    reports = verify_table2(run_oracle=not args.no_oracle)
    sys.stdout.write(table2_csv(reports))
    return 0 if all(r.ok for r in reports) else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = OracleConfig(prime=args.prime, seeds=tuple(_ints(args.seeds)))
    print(json.dumps(dimension(_system(args), cfg).to_json(), sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhverify", description="Classify planar linear systems with fat base points.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify one system and print the verdict JSON")
    a.add_argument("--d", type=int, required=True)
    a.add_argument("--m", required=True, help="comma separated multiplicities")
    a.add_argument("--oracle", action="store_true", help="attach the finite-field rank verdict")
    a.add_argument("--script", help="checker strategy JSON to replay")
    a.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("census", help="classify every system of a filter")
    c.add_argument("--M", type=int, required=True)
    c.add_argument("--d-max", type=int, default=None, help="largest degree (default D(M) - 1)")
    c.add_argument("--filter", choices=("candidate", "all"), default="candidate")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--checkpoint")
    c.add_argument("--out")
    c.add_argument("--shard", type=int, default=0)
    c.add_argument("--nshards", type=int, default=1)
    c.add_argument("--count-only", action="store_true", help="print filter counts without classifying")
    c.set_defaults(func=_cmd_census)

    t = sub.add_parser("tables", help="CSV of the degree bound table or the hard-case report")
    t.add_argument("--which", type=int, choices=(1, 2), required=True)
    t.add_argument("--no-oracle", action="store_true", help="skip rank computations in the report")
    t.set_defaults(func=_cmd_tables)

    o = sub.add_parser("oracle", help="dimension from random points over F_p")
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--m", required=True)
    o.add_argument("--prime", type=int, default=MERSENNE31)
    o.add_argument("--seeds", default="1,2,3")
    o.set_defaults(func=_cmd_oracle)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
