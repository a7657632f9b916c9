"""Play the checker game on L_5(3, 2^5) and on the special system L_2(2^2).

Run: python3 demos/worked_example.py
"""
from __future__ import annotations

from hhverify.game import (
    SLIDE_DOWN,
    SLIDE_RIGHT,
    PlaceCorner,
    Strategy,
    certifies_nonspecial,
    pattern_script,
    replay,
)
from hhverify.linsys import LinearSystem, expected_dimension
from hhverify.oracle import dimension
from hhverify.pipeline import classify


# triple point at X, a double point at Z, then four double points fed in at Y
WORKED = Strategy(
    (
        PlaceCorner(3, "X"),
        PlaceCorner(2, "Z"),
        SLIDE_RIGHT,
        PlaceCorner(2, "Y"),
        SLIDE_DOWN,
        PlaceCorner(2, "Y"),
        SLIDE_DOWN,
        SLIDE_RIGHT,
        PlaceCorner(2, "Y"),
        SLIDE_DOWN,
        PlaceCorner(2, "Y"),
    )
)


def show(title: str, board) -> None:
    print(f"-- {title}")
    print(board)
    print()


def main() -> None:
    sys5 = LinearSystem.of(5, 3, 2, 2, 2, 2, 2)
    strat = WORKED
    print(f"{sys5}: expected dimension {expected_dimension(sys5)}")
    for n in range(1, len(strat.moves) + 1):
        out = replay(sys5, Strategy(strat.moves[:n]))
        show(f"after move {n}: {strat.moves[n - 1]}", out.finalBoard)
    out = replay(sys5, strat)
    print(f"board full: {out.emptyCells == 0}, certifies emptiness: {certifies_nonspecial(sys5, out)}")
    print(f"oracle dimension: {dimension(sys5).dim}\n")

    sys2 = LinearSystem.of(2, 2, 2)
    out = replay(sys2, pattern_script((2, 2)))
    show(f"{sys2}: the second double point has no free corner (move {out.blockedAt})", out.finalBoard)
    v = classify(sys2)
    o = dimension(sys2)
    print(f"toolbox: {v.cls} via {v.method}, certificate {v.cert}")
    print(f"oracle: dimension {o.dim}, expected {expected_dimension(sys2)}, gap {o.specialityGap}")


if __name__ == "__main__":
    main()
