"""The forty-two hard systems left after the automated census for M = 7.

Each row records the system, the kind of argument that settles it, and for
the checker rows the order in which points are specialized.  Orders list
multiplicities; the replay places each one on the Y corner and compacts it
down and then right.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linsys import LinearSystem

GAME = "Triangular checker game"
CREMONA = "Cremona transformation"
CUBICS = "Cubics in the base locus"
HOMOGENEOUS = "Homogeneous"
TWO = "Degeneration lemma"
SAVE = "Degeneration lemma with matching"
IMPLIED = "Implied by"


@dataclass(frozen=True)
class Table2Row:
    sys: LinearSystem
    reason: str
    order: Optional[tuple[int, ...]] = None
    then: Optional[tuple[int, ...]] = None  # second stage after a conic splits off
    implied_by: Optional[LinearSystem] = None


def _L(d: int, *groups: tuple[int, int]) -> LinearSystem:
    return LinearSystem.from_groups(d, groups)


def _o(*groups: tuple[int, int]) -> tuple[int, ...]:
    out: list[int] = []
    for m, k in groups:
        out += [m] * k
    return tuple(out)


_L22_2_6_7_9 = _L(22, (2, 1), (6, 1), (7, 9))

TABLE2: tuple[Table2Row, ...] = (
    Table2Row(_L(15, (3, 1), (4, 1), (5, 8)), GAME, _o((5, 5), (4, 1), (3, 1))),
    Table2Row(_L(16, (2, 1), (5, 10)), GAME, _o((5, 5), (2, 1)), then=(4, 4)),
    Table2Row(_L(17, (1, 2), (5, 8), (6, 1), (7, 1)), CREMONA),
    Table2Row(_L(17, (2, 1), (5, 7), (6, 3)), CREMONA),
    Table2Row(_L(17, (4, 1), (5, 7), (7, 2)), CREMONA),
    Table2Row(_L(18, (1, 1), (3, 1), (5, 1), (6, 8)), GAME, _o((6, 5), (5, 1), (3, 1), (1, 1))),
    Table2Row(_L(18, (1, 1), (5, 7), (7, 3)), CREMONA),
    Table2Row(_L(18, (1, 2), (5, 6), (6, 2), (7, 2)), CREMONA),
    Table2Row(_L(18, (2, 1), (6, 9)), CUBICS),
    Table2Row(_L(18, (4, 5), (7, 5)), CREMONA),
    Table2Row(_L(19, (1, 1), (3, 1), (6, 7), (7, 2)), CREMONA),
    Table2Row(_L(19, (1, 1), (6, 10)), HOMOGENEOUS),
    Table2Row(_L(19, (2, 2), (5, 1), (6, 9)), GAME, _o((5, 1), (6, 6), (2, 2))),
    Table2Row(_L(19, (3, 1), (5, 1), (6, 1), (7, 6)), CREMONA),
    Table2Row(_L(19, (3, 1), (5, 1), (6, 5), (7, 3)), CREMONA),
    Table2Row(_L(19, (3, 1), (5, 1), (6, 9)), GAME, _o((6, 6), (5, 1), (3, 1))),
    Table2Row(_L(19, (4, 1), (5, 4), (7, 5)), CREMONA),
    Table2Row(_L(19, (5, 1), (6, 8), (7, 1)), GAME, _o((7, 1), (6, 4), (5, 1), (6, 1))),
    Table2Row(_L(19, (6, 10)), HOMOGENEOUS),
    Table2Row(_L(20, (1, 1), (3, 1), (6, 4), (7, 5)), CREMONA),
    Table2Row(_L(20, (1, 1), (3, 1), (6, 8), (7, 2)), GAME, _o((7, 2), (6, 5), (1, 1), (3, 1))),
    Table2Row(_L(20, (1, 1), (6, 11)), HOMOGENEOUS),
    Table2Row(_L(20, (1, 1), (6, 7), (7, 3)), CREMONA),
    Table2Row(_L(20, (3, 1), (5, 1), (6, 2), (7, 6)), CREMONA),
    Table2Row(_L(20, (3, 1), (5, 1), (6, 6), (7, 3)), CREMONA),
    Table2Row(_L(20, (5, 1), (6, 5), (7, 4)), CREMONA),
    Table2Row(_L(20, (6, 11)), HOMOGENEOUS),
    Table2Row(_L(20, (6, 7), (7, 3)), CREMONA),
    Table2Row(_L(21, (1, 1), (2, 1), (4, 1), (5, 1), (7, 8)), GAME, _o((7, 4), (1, 1), (7, 1), (5, 1), (2, 1))),
    Table2Row(_L(21, (1, 1), (6, 4), (7, 6)), TWO),
    Table2Row(_L(21, (1, 2), (3, 1), (6, 1), (7, 8)), TWO),
    Table2Row(_L(21, (2, 1), (7, 9)), CUBICS),
    Table2Row(_L(21, (5, 1), (6, 2), (7, 7)), TWO),
    Table2Row(_L(22, (1, 1), (2, 1), (6, 1), (7, 9)), IMPLIED, implied_by=_L22_2_6_7_9),
    Table2Row(_L(22, (1, 3), (6, 1), (7, 9)), IMPLIED, implied_by=_L22_2_6_7_9),
    Table2Row(_L22_2_6_7_9, TWO),
    Table2Row(_L(22, (2, 1), (6, 13)), SAVE),
    Table2Row(_L(22, (4, 1), (5, 1), (7, 9)), GAME, _o((5, 1), (7, 5), (4, 1))),
    Table2Row(_L(22, (4, 1), (6, 2), (7, 8)), GAME, _o((7, 3), (6, 1), (7, 2), (6, 1), (4, 1))),
    Table2Row(_L(23, (6, 1), (7, 10)), GAME, _o((7, 7), (6, 1))),
    Table2Row(_L(26, (6, 18)), HOMOGENEOUS),
    Table2Row(_L(27, (5, 1), (7, 14)), GAME, _o((7, 11), (5, 1))),
)

assert len(TABLE2) == 42


# ---------------------------------------------------------------- verification

# residual boards drawn for the two rows whose replay is shown in full
# (cells (i, j) listed per row j, see game.Board)
FIGURE_L15 = frozenset({(i, 0) for i in range(3, 10)} | {(i, 1) for i in range(6, 9)})
FIGURE_L16 = frozenset(
    {(i, 0) for i in range(1, 11)} | {(i, 1) for i in range(6, 10)} | {(7, 2), (8, 2)}
)


@dataclass
class RowReport:
    row: Table2Row
    oracle: Optional[dict]
    toolbox: dict
    checks: dict
    notes: list

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _leftover(sys: LinearSystem, order: tuple[int, ...]) -> list[int]:
    left = list(sys.mults)
    for m in order:
        left.remove(m)
    return left


def _game_checks(row: Table2Row, checks: dict, notes: list) -> None:
    from .game import (
        Board,
        CornerBlocked,
        PlaceCorner,
        extract_full_border_lines,
        pattern_script,
        place_corner,
        replay,
        slide,
    )

    out = replay(row.sys, pattern_script(row.order))
    checks["replayUnblocked"] = out.blockedAt is None
    lines, residual = extract_full_border_lines(out.finalBoard, "bottom")
    left = _leftover(row.sys, row.order)
    dres = row.sys.d - lines
    notes.append(f"{lines} full rows split off; degree {dres} residual with points {left}")
    if row.sys == TABLE2[0].sys:
        checks["residualMatchesFigure"] = residual.occupied == FIGURE_L15
    elif row.then is not None:
        # a conic through the five unspecialized points splits off: the
        # residual pattern drops two degrees toward the X side
        shifted = {(i - 2, j) for i, j in residual.occupied}
        checks["residualMatchesFigure"] = min(i for i, _ in residual.occupied) >= 2 and shifted == FIGURE_L16
        b = Board.from_cells(dres - 2, FIGURE_L16)
        try:
            for mv in pattern_script(row.then).moves:
                b = place_corner(b, mv.m, mv.corner) if isinstance(mv, PlaceCorner) else slide(b, mv)
        except CornerBlocked:
            checks["secondStageUnblocked"] = False
        else:
            checks["secondStageUnblocked"] = True
            more, _ = extract_full_border_lines(b, "bottom")
            notes.append(f"second stage {list(row.then)} fills {more} bottom rows")
    elif len(left) == 3:
        checks["pairLinesForced"] = all(a + b > dres for a, b in ((left[0], left[1]), (left[0], left[2]), (left[1], left[2])))
    else:
        notes.append(f"the listed order leaves {len(left)} points unspecialized, not three")


def verify_row(row: Table2Row, classifier=None, oracle_cfg=None, run_oracle: bool = True) -> RowReport:
    from .cremona import classify_empty_by_base_overload, cremona_step
    from .oracle import dimension
    from .pipeline import EMPTY, Classifier, dominates

    classifier = classifier or Classifier()
    checks: dict = {}
    notes: list = []
    ov = None
    if run_oracle:
        o = dimension(row.sys, oracle_cfg)
        ov = o.to_json()
        checks["oracleEmpty"] = o.dim == -1 and o.seedsAgreed
    v = classifier(row.sys)
    checks["toolboxEmpty"] = v.cls == EMPTY
    if row.order is not None:
        _game_checks(row, checks, notes)
    if row.reason == CREMONA:
        step = cremona_step(row.sys)
        checks["cremonaClean"] = step.s > 0 and not step.clamped and step.after is not None
        if step.after is not None:
            red = classifier(step.after)
            resolved = red.cls == EMPTY
            if not resolved and run_oracle:
                resolved = dimension(step.after, oracle_cfg).dim == -1
            checks["reducedResolved"] = resolved
            notes.append(f"reduces to {step.after} (s={step.s}), {red.cls} via {red.method}")
    if row.reason == CUBICS:
        checks["baseOverload"] = classify_empty_by_base_overload(row.sys) is not None
    if row.implied_by is not None:
        checks["dominated"] = dominates(row.sys, row.implied_by)
        checks["impliedEmpty"] = classifier(row.implied_by).cls == EMPTY
    return RowReport(row, ov, {"class": v.cls, "method": v.method}, checks, notes)


def verify_table2(oracle_cfg=None, run_oracle: bool = True, classifier=None) -> list[RowReport]:
    from .pipeline import Classifier

    classifier = classifier or Classifier()
    return [verify_row(r, classifier, oracle_cfg, run_oracle) for r in TABLE2]


def table2_csv(reports: list[RowReport]) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("system", "reason", "oracle_dim", "seeds_agreed", "toolbox_class", "toolbox_method", "checks", "ok", "notes"))
    for r in reports:
        w.writerow(
            (
                str(r.row.sys),
                r.row.reason,
                r.oracle["dim"] if r.oracle else "",
                r.oracle["seedsAgreed"] if r.oracle else "",
                r.toolbox["class"],
                r.toolbox["method"],
                ";".join(f"{k}={'pass' if val else 'FAIL'}" for k, val in r.checks.items()),
                r.ok,
                " | ".join(r.notes),
            )
        )
    return buf.getvalue()
