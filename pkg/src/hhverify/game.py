"""The triangular checker game.

Cell (i, j) of a degree-d board is the monomial X^i Y^j Z^(d-i-j).  The X
corner is (d, 0), the Y corner (0, d) and the Z corner (0, 0).  A checker on a
cell records that the monomial is not in the specialized ideal, so a curve in
the degenerate system is a combination of the empty cells.  Boards are
bitboards packed row by row (constant j).

Lines come in three families, named by the coordinate held constant:
``constI`` lines join the Y and Z sides, ``constJ`` lines the X and Z sides and
``constK`` lines the X and Y sides.  A slide compacts every line of one family
toward one of the two corners that family points at.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .linsys import LinearSystem, expected_dimension, monomials

CORNERS = ("X", "Y", "Z")
FAMILIES = ("constI", "constJ", "constK")
SLIDE_TARGETS = {"constI": ("Y", "Z"), "constJ": ("X", "Z"), "constK": ("X", "Y")}

# coordinate substitution whose flat limit each slide realizes
SUBSTITUTIONS = {
    ("constK", "Y"): "X -> X + Y/t",
    ("constJ", "Z"): "X -> X + Z/t",
    ("constK", "X"): "Y -> Y + X/t",
    ("constI", "Z"): "Y -> Y + Z/t",
    ("constJ", "X"): "Z -> Z + X/t",
    ("constI", "Y"): "Z -> Z + Y/t",
}


class CornerBlocked(Exception):
    pass


class InvalidStrategy(ValueError):
    pass


@dataclass(frozen=True)
class PlaceCorner:
    m: int
    corner: str
    overlap: bool = False  # impose the conditions even on occupied cells

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("placement multiplicity must be positive")
        if self.corner not in CORNERS:
            raise ValueError(f"unknown corner {self.corner!r}")

    def to_json(self) -> dict:
        body: dict = {"m": self.m, "corner": self.corner}
        if self.overlap:
            body["overlap"] = True
        return {"place": body}


@dataclass(frozen=True)
class Slide:
    family: str
    target: str

    def __post_init__(self) -> None:
        if self.family not in SLIDE_TARGETS:
            raise ValueError(f"unknown line family {self.family!r}")
        if self.target not in SLIDE_TARGETS[self.family]:
            raise ValueError(f"{self.family} lines do not point at corner {self.target}")

    def to_json(self) -> dict:
        return {"slide": {"family": self.family, "target": self.target}}


Move = Union[PlaceCorner, Slide]

SLIDE_DOWN = Slide("constI", "Z")
SLIDE_RIGHT = Slide("constJ", "X")
ALL_SLIDES = tuple(Slide(f, t) for f in FAMILIES for t in SLIDE_TARGETS[f])


def move_from_json(obj: dict) -> Move:
    if "place" in obj:
        body = obj["place"]
        return PlaceCorner(int(body["m"]), body["corner"], bool(body.get("overlap", False)))
    if "slide" in obj:
        return Slide(obj["slide"]["family"], obj["slide"]["target"])
    raise ValueError(f"not a move: {obj!r}")


@dataclass(frozen=True)
class Strategy:
    moves: tuple[Move, ...] = ()

    @property
    def placements(self) -> list[int]:
        return [mv.m for mv in self.moves if isinstance(mv, PlaceCorner)]

    def to_json(self) -> list:
        return [mv.to_json() for mv in self.moves]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "Strategy":
        return cls(tuple(move_from_json(o) for o in data))

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Strategy":
        return cls.from_json(json.loads(Path(path).read_text()))

    def __add__(self, other: "Strategy") -> "Strategy":
        return Strategy(self.moves + other.moves)


# ---------------------------------------------------------------- geometry


class _Geometry:
    """Precomputed bit masks for one board size."""

    def __init__(self, d: int):
        self.d = d
        self.ncells = monomials(d)
        self.offset = [0] * (d + 2)
        for j in range(d + 1):
            self.offset[j + 1] = self.offset[j] + (d - j + 1)
        self.full = (1 << self.ncells) - 1
        # per slide: list of (line mask, fill masks by count)
        self.slides: dict[tuple[str, str], list[tuple[int, list[int]]]] = {}
        for fam in FAMILIES:
            for tgt in SLIDE_TARGETS[fam]:
                self.slides[(fam, tgt)] = [
                    self._line_table(cells) for cells in self._lines(fam, tgt)
                ]
        self._corner_cache: dict[tuple[int, str], int] = {}

    def bit(self, i: int, j: int) -> int:
        return 1 << (self.offset[j] + i)

    def _lines(self, fam: str, tgt: str) -> list[list[tuple[int, int]]]:
        d = self.d
        out = []
        for c in range(d + 1):
            if fam == "constI":
                cells = [(c, j) for j in range(d - c + 1)]  # from the Z end
                if tgt == "Y":
                    cells.reverse()
            elif fam == "constJ":
                cells = [(i, c) for i in range(d - c + 1)]  # from the Z end
                if tgt == "X":
                    cells.reverse()
            else:
                cells = [(i, d - c - i) for i in range(d - c + 1)]  # from the Y end
                if tgt == "X":
                    cells.reverse()
            out.append(cells)
        return out

    def _line_table(self, cells: list[tuple[int, int]]) -> tuple[int, list[int]]:
        fills = [0]
        acc = 0
        for i, j in cells:
            acc |= self.bit(i, j)
            fills.append(acc)
        return acc, fills

    def line_masks(self, fam: str) -> list[int]:
        tgt = SLIDE_TARGETS[fam][0]
        return [mask for mask, _ in self.slides[(fam, tgt)]]

    def corner(self, m: int, corner: str) -> int:
        key = (m, corner)
        mask = self._corner_cache.get(key)
        if mask is None:
            d = self.d
            mask = 0
            for j in range(d + 1):
                for i in range(d - j + 1):
                    if corner == "X":
                        hit = i >= d - m + 1
                    elif corner == "Y":
                        hit = j >= d - m + 1
                    else:
                        hit = i + j <= m - 1
                    if hit:
                        mask |= self.bit(i, j)
            self._corner_cache[key] = mask
        return mask


@lru_cache(maxsize=None)
def geometry(d: int) -> _Geometry:
    return _Geometry(d)


# ---------------------------------------------------------------- boards


@dataclass(frozen=True)
class Board:
    """Occupancy of the degree-d triangle.  ``d = -1`` is the empty board."""

    d: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.d < -1:
            raise ValueError("board degree must be at least -1")
        if self.d >= 0 and self.bits >> geometry(self.d).ncells:
            raise ValueError("occupied cell outside the triangle")
        if self.d == -1 and self.bits:
            raise ValueError("the degree -1 board has no cells")

    @classmethod
    def from_cells(cls, d: int, cells: Iterable[tuple[int, int]]) -> "Board":
        g = geometry(d)
        bits = 0
        for i, j in cells:
            if i < 0 or j < 0 or i + j > d:
                raise ValueError(f"cell {(i, j)} not on the degree {d} board")
            bits |= g.bit(i, j)
        return cls(d, bits)

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "Board":
        """Parse a picture: top row first, '#' occupied, '.' empty."""
        rows = [r.replace(" ", "") for r in rows]
        d = len(rows) - 1
        cells = []
        for top, row in enumerate(rows):
            j = d - top
            if len(row) != d - j + 1:
                raise ValueError(f"row {j} should have {d - j + 1} cells")
            cells.extend((i, j) for i, ch in enumerate(row) if ch == "#")
        return cls.from_cells(d, cells)

    @property
    def ncells(self) -> int:
        return monomials(self.d)

    @property
    def occupied(self) -> frozenset[tuple[int, int]]:
        if self.d < 0:
            return frozenset()
        g = geometry(self.d)
        return frozenset(
            (i, j)
            for j in range(self.d + 1)
            for i in range(self.d - j + 1)
            if self.bits & g.bit(i, j)
        )

    @property
    def count(self) -> int:
        return self.bits.bit_count()

    @property
    def empty_cells(self) -> int:
        return self.ncells - self.count

    def is_occupied(self, i: int, j: int) -> bool:
        return bool(self.bits & geometry(self.d).bit(i, j))

    def rows(self) -> list[str]:
        out = []
        for j in range(self.d, -1, -1):
            out.append(
                " ".join("#" if self.is_occupied(i, j) else "." for i in range(self.d - j + 1))
            )
        return out

    def __str__(self) -> str:
        return "\n".join(self.rows()) if self.d >= 0 else "<empty board>"


def place_corner(b: Board, m: int, corner: str, overlap: bool = False) -> Board:
    """Occupy the m-triangle at a corner.

    Normally the triangle must be free.  With ``overlap`` the conditions are
    imposed on whatever is still empty there; the cell count remains an upper
    bound for the dimension, it just wastes conditions.
    """
    if m < 1:
        raise ValueError("multiplicity must be positive")
    if b.d < 0:
        raise CornerBlocked("the empty board has no corners")
    if overlap:
        return Board(b.d, b.bits | geometry(b.d).corner(m, corner))
    if m > b.d + 1:
        raise CornerBlocked(f"a {m}-triangle does not fit on a degree {b.d} board")
    mask = geometry(b.d).corner(m, corner)
    if b.bits & mask:
        raise CornerBlocked(f"{corner} corner has no free {m}-triangle")
    return Board(b.d, b.bits | mask)


def _slide_bits(bits: int, table: list[tuple[int, list[int]]]) -> int:
    out = 0
    for mask, fills in table:
        out |= fills[(bits & mask).bit_count()]
    return out


def slide(b: Board, s: Slide) -> Board:
    if b.d < 0:
        return b
    return Board(b.d, _slide_bits(b.bits, geometry(b.d).slides[(s.family, s.target)]))


def line_counts(b: Board, family: str) -> list[int]:
    if b.d < 0:
        return []
    return [(b.bits & mask).bit_count() for mask in geometry(b.d).line_masks(family)]


# ---------------------------------------------------------------- residuals

BORDER_SIDES = ("bottom", "left", "hypotenuse")


def extract_full_border_lines(b: Board, side: str) -> tuple[int, Board]:
    """Strip fully occupied lines off one side of the board.

    ``bottom`` lines are j = 0, 1, ... (each one is a copy of Y = 0 in the base
    locus), ``left`` lines are i = 0, 1, ... (X = 0) and ``hypotenuse`` lines are
    k = 0, 1, ... (Z = 0).  The residual board lives in degree d - k.
    """
    if side not in BORDER_SIDES:
        raise ValueError(f"side must be one of {BORDER_SIDES}")
    d = b.d
    if d < 0:
        return 0, b
    cells = b.occupied
    k = 0
    while k <= d:
        if side == "bottom":
            line = [(i, k) for i in range(d - k + 1)]
        elif side == "left":
            line = [(k, j) for j in range(d - k + 1)]
        else:
            line = [(i, d - k - i) for i in range(d - k + 1)]
        if not all(c in cells for c in line):
            break
        k += 1
    if k == 0:
        return 0, b
    e = d - k
    if e < 0:
        return k, Board(-1)
    if side == "bottom":
        kept = [(i, j - k) for i, j in cells if j >= k]
    elif side == "left":
        kept = [(i - k, j) for i, j in cells if i >= k]
    else:
        kept = [(i, j) for i, j in cells if i + j <= e]
    return k, Board.from_cells(e, kept)


# ---------------------------------------------------------------- replay


@dataclass(frozen=True)
class GameOutcome:
    finalBoard: Board
    placedAll: bool
    emptyCells: int
    usedMults: tuple[int, ...]
    blockedAt: Optional[int] = None  # index of the move that could not be made

    @property
    def dimension_bound(self) -> int:
        return self.emptyCells - 1


def _check_submultiset(sys: LinearSystem, strat: Strategy) -> None:
    avail = list(sys.mults)
    for m in strat.placements:
        if m not in avail:
            raise InvalidStrategy(f"multiplicity {m} not available in {sys}")
        avail.remove(m)


def replay(sys: LinearSystem, strat: Strategy) -> GameOutcome:
    _check_submultiset(sys, strat)
    b = Board(sys.d)
    used: list[int] = []
    blocked = None
    for idx, mv in enumerate(strat.moves):
        if isinstance(mv, PlaceCorner):
            try:
                b = place_corner(b, mv.m, mv.corner, mv.overlap)
            except CornerBlocked:
                blocked = idx
                break
            used.append(mv.m)
        else:
            b = slide(b, mv)
    placed_all = blocked is None and sorted(used) == sorted(sys.mults)
    return GameOutcome(b, placed_all, b.empty_cells, tuple(sorted(used, reverse=True)), blocked)


def certifies_nonspecial(sys: LinearSystem, outcome: GameOutcome) -> bool:
    # the empty cells bound the dimension from above; meeting e(sys) settles it
    return outcome.placedAll and outcome.emptyCells - 1 == expected_dimension(sys)


def pattern_script(order: Sequence[int]) -> Strategy:
    """Place each point on the Y corner, slide down, then slide right."""
    moves: list[Move] = []
    for m in order:
        moves += [PlaceCorner(m, "Y"), SLIDE_DOWN, SLIDE_RIGHT]
    return Strategy(tuple(moves))


def simple_point_moves(n: int) -> Strategy:
    # a row compaction toward X leaves any hole at i = 0; compacting column
    # i = 0 toward Y then frees the Z corner cell
    moves: list[Move] = []
    for _ in range(n):
        moves += [Slide("constJ", "X"), Slide("constI", "Y"), PlaceCorner(1, "Z")]
    return Strategy(tuple(moves))


# ---------------------------------------------------------------- search


@dataclass
class SearchBudget:
    nodes: int = 10**6
    max_discrepancy: int = 64


@dataclass
class SearchResult:
    strategy: Optional[Strategy]
    nodes: int
    exhaustive: bool

    @property
    def won(self) -> bool:
        return self.strategy is not None


_OTHER = {"X": ("Y", "Z"), "Y": ("Z", "X"), "Z": ("X", "Y")}


def _family(a: str, b: str) -> str:
    # the family whose lines are parallel to the edge joining corners a and b
    return {frozenset("YZ"): "constI", frozenset("XZ"): "constJ", frozenset("XY"): "constK"}[
        frozenset((a, b))
    ]


@lru_cache(maxsize=None)
def _templates() -> tuple[tuple[str, tuple[Slide, ...]], ...]:
    """(corner, slides applied after the placement), most promising first."""
    out: list[tuple[str, tuple[Slide, ...]]] = []
    for c in ("Y", "X", "Z"):
        t1, t2 = _OTHER[c]
        for a, b in ((t1, t2), (t2, t1)):
            out.append((c, (Slide(_family(c, a), a), Slide(_family(a, b), b))))
    for c in ("Y", "X", "Z"):
        t1, t2 = _OTHER[c]
        out.append((c, (Slide(_family(c, t1), t1),)))
        out.append((c, (Slide(_family(c, t2), t2),)))
        out.append((c, ()))
    return tuple(out)


class _Searcher:
    def __init__(self, d: int, budget: SearchBudget, overfull: bool = False):
        self.g = geometry(d)
        self.full = (1 << self.g.ncells) - 1
        self.overfull = overfull  # more checkers than cells: last point may overlap
        self.budget = budget
        self.nodes = 0
        self.cut = False
        self.failed: dict[tuple[int, tuple[int, ...]], int] = {}
        self.templates = [
            (c, tuple(self.g.slides[(s.family, s.target)] for s in seq), seq)
            for c, seq in _templates()
        ]

    def children(self, bits: int, remaining: tuple[int, ...]):
        seen = set()
        for idx, m in enumerate(remaining):
            if idx and remaining[idx - 1] == m:
                continue
            rest = remaining[:idx] + remaining[idx + 1 :]
            overlap = self.overfull and not rest
            for c, tables, seq in self.templates:
                mask = self.g.corner(m, c)
                if bits & mask and not overlap:
                    continue
                nb = bits | mask
                for t in tables:
                    nb = _slide_bits(nb, t)
                key = (nb, rest)
                if key in seen:
                    continue
                seen.add(key)
                yield nb, rest, (PlaceCorner(m, c, bool(bits & mask)),) + seq

    def dfs(self, bits: int, remaining: tuple[int, ...], disc: int) -> Optional[list]:
        if not remaining:
            return [] if not self.overfull or bits == self.full else None
        key = (bits, remaining)
        if self.failed.get(key, -1) >= disc:
            return None
        self.nodes += 1
        if self.nodes > self.budget.nodes:
            raise _BudgetExhausted
        for rank, (nb, rest, moves) in enumerate(self.children(bits, remaining)):
            cost = 1 if rank else 0
            if cost > disc:
                self.cut = True
                break
            sub = self.dfs(nb, rest, disc - cost)
            if sub is not None:
                return list(moves) + sub
        self.failed[key] = max(self.failed.get(key, -1), disc)
        return None


class _BudgetExhausted(Exception):
    pass


def search(sys: LinearSystem, budget: Optional[SearchBudget] = None) -> SearchResult:
    """Look for a move sequence that fits every checker of ``sys`` on the board.

    Multiplicities of at least two are searched by limited-discrepancy DFS with
    a failure table keyed by (board, remaining points); simple points are then
    appended with a fixed two-slide recipe.
    """
    budget = budget or SearchBudget()
    d = sys.d
    core = tuple(m for m in sys.mults if m >= 2)
    ones = sys.simple_points
    if not sys.mults:
        return SearchResult(Strategy(), 0, False)
    if d == 0 or (core and core[0] > d):
        # a point heavier than the degree kills everything; one overlapping
        # placement fills the board
        strat = Strategy((PlaceCorner(sys.max_mult, "Z", True),))
        rest = list(sys.mults[1:])
        moves = tuple(PlaceCorner(m, "Z", True) for m in rest)
        return SearchResult(strat + Strategy(moves), 0, False)
    core_checkers = sum(m * (m + 1) // 2 for m in core)
    cells = monomials(d)
    overfull = core_checkers > cells
    if overfull and core_checkers - core[-1] * (core[-1] + 1) // 2 > cells:
        return SearchResult(None, 0, True)
    s = _Searcher(d, budget, overfull)
    found = None
    exhaustive = False
    try:
        for disc in range(budget.max_discrepancy + 1):
            s.cut = False
            found = s.dfs(0, core, disc)
            if found is not None or not s.cut:
                exhaustive = found is None
                break
    except _BudgetExhausted:
        pass
    if found is None:
        return SearchResult(None, s.nodes, exhaustive)
    holes = 0 if overfull else cells - core_checkers
    fit = min(ones, holes)
    tail = tuple(PlaceCorner(1, "Z", True) for _ in range(ones - fit))
    return SearchResult(Strategy(tuple(found)) + simple_point_moves(fit) + Strategy(tail), s.nodes, False)


def search_strategy(sys: LinearSystem, budget: Optional[SearchBudget] = None) -> Optional[Strategy]:
    """Winning strategy for ``sys`` or None when the budget runs out."""
    return search(sys, budget).strategy


# ---------------------------------------------------------------- lemma check


def slide_determinant_identity(a: Sequence[int]) -> Fraction:
    """det [binom(a_i, j)] for 0 <= j < l, by exact elimination over Q."""
    a = list(a)
    if not a or any(x < 0 for x in a) or any(x >= y for x, y in zip(a, a[1:])):
        raise ValueError("need a strictly increasing tuple of nonnegative integers")
    n = len(a)
    rows = [[Fraction(comb(ai, j)) for j in range(n)] for ai in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col] / rows[col][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def vandermonde_closed_form(a: Sequence[int]) -> Fraction:
    n = len(a)
    num = prod(a[j] - a[i] for i, j in combinations(range(n), 2))
    return Fraction(num, prod(factorial(k) for k in range(n)))
