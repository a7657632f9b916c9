"""Dimension bounds from degenerating the plane into two components.

A split moves some points (l of each multiplicity group) onto the component
F and keeps a degree-a system on the other component P.  The four restricted
systems and their dimensions decide whether the original system can be shown
empty.  The second half of the module holds the exact integer bound functions
that govern the induction on the degree.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .linsys import (
    LinearSystem,
    binom2,
    conditions,
    expected_dimension,
    monomials,
    pad_with_simple_points,
    virtual_dimension,
)


class SubdimensionUnavailable(RuntimeError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------- splits


@dataclass(frozen=True)
class DegenerationSplit:
    sys: LinearSystem
    a: int
    l: tuple[int, ...]  # aligned with sys.groups()

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))
        if not 0 <= self.a <= self.sys.d:
            raise ValueError(f"a={self.a} outside [0, {self.sys.d}]")
        groups = self.sys.groups()
        if len(self.l) != len(groups):
            raise ValueError("l must have one entry per multiplicity group")
        for (m, k), li in zip(groups, self.l):
            if not 0 <= li <= k:
                raise ValueError(f"l entry {li} outside [0, {k}] for multiplicity {m}")

    def f_points(self) -> tuple[int, ...]:
        out: list[int] = []
        for (m, _), li in zip(self.sys.groups(), self.l):
            out += [m] * li
        return tuple(out)

    def p_points(self) -> tuple[int, ...]:
        out: list[int] = []
        for (m, k), li in zip(self.sys.groups(), self.l):
            out += [m] * (k - li)
        return tuple(out)

    def subsystems(self) -> dict[str, Optional[LinearSystem]]:
        """L_P, L_F and the kernels hat L_P, hat L_F (None means degree < 0)."""
        p, f, a, d = self.p_points(), self.f_points(), self.a, self.sys.d
        return {
            "P": LinearSystem(a, p),
            "F": LinearSystem(d, f + (a,)),
            "hatP": LinearSystem(a - 1, p) if a >= 1 else None,
            "hatF": LinearSystem(d, f + (a + 1,)),
        }

    def to_json(self) -> dict:
        return {"sys": self.sys.to_json(), "a": self.a, "l": list(self.l)}


@dataclass(frozen=True)
class QuadDims:
    lP: int
    lF: int
    lhatP: int
    lhatF: int

    def __post_init__(self) -> None:
        if min(self.lP, self.lF, self.lhatP, self.lhatF) < -1:
            raise ValueError("dimensions are at least -1")

    @property
    def rP(self) -> int:
        return self.lP - self.lhatP - 1

    @property
    def rF(self) -> int:
        return self.lF - self.lhatF - 1


def l0_from_quad(q: QuadDims, a: int) -> int:
    """Dimension of the limit system from the four component dimensions.

    The branch point is taken as stated for this recursion (r_P + r_F <= a + 1).
    The certifier below additionally demands r_P + r_F <= a - 1, which is what
    two transverse subspaces of an (a+1)-dimensional space need to meet in 0.
    """
    if a < 0:
        raise ValueError("a must be nonnegative")
    if q.rP + q.rF <= a + 1:
        return q.lhatP + q.lhatF + 1
    return q.lP + q.lF - a


def virtual_quadruple(d: int, a: int, m: int, l: int, rest: Sequence[int] | LinearSystem) -> tuple[int, int, int, int]:
    """(v_P, v_F, hat v_P, hat v_F) when l points of multiplicity m go to F.

    ``rest`` holds the points that stay on P.
    """
    tail = rest.mults if isinstance(rest, LinearSystem) else tuple(rest)
    on_p = sum(conditions(x) for x in tail)
    moved = l * conditions(m)
    vP = binom2(a + 2) - on_p - 1
    vF = binom2(d + 2) - binom2(a + 1) - moved - 1
    vhatP = binom2(a + 1) - on_p - 1
    vhatF = binom2(d + 2) - binom2(a + 2) - moved - 1
    return vP, vF, vhatP, vhatF


# ---------------------------------------------------------------- lemmas


def quasi_homogeneous_nonspecial(d: int, m: int, b: int, gamma: int) -> bool:
    """Hypothesis check for L_d(m^b, d - m + gamma) being non-special."""
    return 2 <= m <= d and b % 2 == 1 and -1 <= gamma <= 1


def quasi_homogeneous_shape(sys: LinearSystem) -> Optional[tuple[int, int, int]]:
    """(m, b, gamma) if sys is L_d(m^b, d - m + gamma) with the lemma's hypotheses."""
    d = sys.d
    groups = dict(sys.groups())
    for extra in set(groups) | {0}:
        rest = dict(groups)
        if extra:
            rest[extra] -= 1
            if rest[extra] == 0:
                del rest[extra]
        if len(rest) != 1:
            continue
        (m, b), = rest.items()
        gamma = extra - d + m
        if quasi_homogeneous_nonspecial(d, m, b, gamma):
            return m, b, gamma
    return None


def max_neg_curve_degree_bound(sys: LinearSystem) -> bool:
    """True when d >= 3 max(m_i), so no (-1)-curve lies in the base locus."""
    return sys.d >= 3 * sys.max_mult


# ---------------------------------------------------------------- sub-dimensions


# a source returns a dimension, optionally paired with a label of how it knows
DimensionSource = Callable[[LinearSystem], object]


@dataclass
class SubdimensionResolver:
    """Actual dimensions of small systems, cheapest evidence first.

    Each source returns a dimension or None.  ``recurse`` lets the caller hook
    in its own classifier; ``oracle`` is a last resort and off by default.
    """

    game_nodes: int = 20_000
    recurse: Optional[DimensionSource] = None
    oracle: Optional[DimensionSource] = None
    memo: dict[LinearSystem, Optional[tuple[int, str]]] = field(default_factory=dict)

    def _by_game(self, s: LinearSystem) -> Optional[int]:
        from .game import SearchBudget, search

        if search(pad_with_simple_points(s), SearchBudget(nodes=self.game_nodes)).won:
            return expected_dimension(s)
        return None

    def resolve(self, s: Optional[LinearSystem]) -> tuple[int, str]:
        if s is None:
            return -1, "trivial"
        if s in self.memo:
            hit = self.memo[s]
            if hit is None:
                raise SubdimensionUnavailable(str(s))
            return hit
        ans: Optional[tuple[int, str]] = None
        if not s.mults:
            ans = (monomials(s.d) - 1, "trivial")
        elif s.max_mult > s.d:
            ans = (-1, "trivial")
        elif quasi_homogeneous_shape(s) is not None:
            ans = (expected_dimension(s), "QuasiHomog")
        else:
            for name, src in (("Game", self._by_game), ("Recursion", self.recurse), ("Oracle", self.oracle)):
                if src is None:
                    continue
                val = src(s)
                if isinstance(val, tuple):
                    val, name = val[0], f"{name}:{val[1]}"
                if val is not None:
                    ans = (val, name)
                    break
        self.memo[s] = ans
        if ans is None:
            raise SubdimensionUnavailable(str(s))
        return ans


def _as_source(dims) -> Callable[[Optional[LinearSystem]], tuple[int, str]]:
    if isinstance(dims, SubdimensionResolver):
        return dims.resolve

    def call(s: Optional[LinearSystem]) -> tuple[int, str]:
        if s is None:
            return -1, "trivial"
        val = dims(s)
        if val is None:
            raise SubdimensionUnavailable(str(s))
        return val, "supplied"

    return call


@dataclass(frozen=True)
class DegenerationCertificate:
    split: DegenerationSplit
    dims: QuadDims
    sources: tuple[str, str, str, str]
    l0: int

    def to_json(self) -> dict:
        q = self.dims
        return {
            "split": self.split.to_json(),
            "dims": {"lP": q.lP, "lF": q.lF, "lhatP": q.lhatP, "lhatF": q.lhatF},
            "sources": list(self.sources),
            "l0": self.l0,
        }


def emptiness_by_degeneration(sys: LinearSystem, split: DegenerationSplit, dims) -> Optional[DegenerationCertificate]:
    """Certificate that sys is empty, or None if this split does not show it.

    ``dims`` is a SubdimensionResolver or a callable returning actual
    dimensions; unresolved sub-systems raise SubdimensionUnavailable.
    """
    if split.sys != sys:
        raise ValueError("split belongs to a different system")
    if virtual_dimension(sys) > -1:
        raise ValueError("pad the system with simple points first")
    subs = split.subsystems()
    if sys in subs.values():
        return None  # a sub-system is the system itself: no information
    src = _as_source(dims)
    # kernels first: they are the usual obstruction
    lhatF, sF = src(subs["hatF"])
    if lhatF != -1:
        return None
    lhatP, shP = src(subs["hatP"])
    if lhatP != -1:
        return None
    lP, sP = src(subs["P"])
    if lP != expected_dimension(subs["P"]):
        return None
    lF, sFF = src(subs["F"])
    if lF != expected_dimension(subs["F"]):
        return None
    q = QuadDims(lP, lF, lhatP, lhatF)
    vP = virtual_dimension(subs["P"])
    vF = virtual_dimension(subs["F"])
    assert vP + vF == virtual_dimension(sys) + split.a
    if q.rP + q.rF > split.a - 1:
        return None
    l0 = l0_from_quad(q, split.a)
    assert l0 == -1
    return DegenerationCertificate(split, q, (sP, sFF, shP, sF), l0)


def candidate_splits(sys: LinearSystem) -> Iterator[DegenerationSplit]:
    """Splits whose kernels are not ruled out by their virtual dimensions."""
    groups = sys.groups()
    d = sys.d
    for a in range(d, 0, -1):
        for l in itertools.product(*(range(k + 1) for _, k in groups)):
            if a == d and not any(l):
                continue  # L_P would be sys itself
            on_f = sum(li * conditions(m) for (m, _), li in zip(groups, l))
            on_p = sum((k - li) * conditions(m) for (m, k), li in zip(groups, l))
            if binom2(a + 1) - on_p - 1 > -1:
                continue
            if binom2(d + 2) - binom2(a + 2) - on_f - 1 > -1:
                continue
            yield DegenerationSplit(sys, a, l)


def find_degeneration_certificate(
    sys: LinearSystem, dims, max_splits: int = 2000
) -> Optional[DegenerationCertificate]:
    """First split (largest a first) that certifies emptiness of padded sys."""
    padded = pad_with_simple_points(sys)
    for n, split in enumerate(candidate_splits(padded)):
        if n >= max_splits:
            break
        try:
            cert = emptiness_by_degeneration(padded, split, dims)
        except SubdimensionUnavailable:
            continue
        if cert is not None:
            return cert
    return None


# ---------------------------------------------------------------- bounds


def dlow(gamma: int, h: int, m: int) -> int:
    num = binom2(m) + binom2(gamma + 1) + (2 * h + 1) * binom2(m + 1) - m * gamma - 1
    return _ceil_div(num, m + 1 - gamma)


def dhigh(gamma: int, h: int, m: int) -> int:
    return m + h + m * h + gamma * h - 1


def h_min(m: int) -> int:
    return _ceil_div(m * m - 1, 3 * m + 4)


def _ceil_sqrt_minus_three_halves(total: int) -> int:
    # least n with n >= -3/2 + sqrt(total), i.e. (2n + 3)^2 >= 4 total, 2n + 3 >= 0
    n = (isqrt(4 * total) - 3) // 2 - 1
    while 2 * n + 3 < 0 or (2 * n + 3) ** 2 < 4 * total:
        n += 1
    return n


def S(M: int) -> int:
    total = sum((2 * h_min(m) + 1) * m * (m + 1) for m in range(1, M + 1))
    return _ceil_sqrt_minus_three_halves(total)


def D(M: int) -> int:
    return max(4 * M + 1, dlow(-1, h_min(M), M), S(M))


def interval_overlap_check(m: int, h: int) -> bool:
    """Check the two interval-gluing equalities, then report whether the
    glued interval for h reaches the start of the one for h + 1.

    The answer is True exactly when h >= h_min(m).
    """
    assert dhigh(-1, h, m) == dlow(0, h, m), (m, h)
    assert dhigh(0, h, m) == dlow(1, h, m), (m, h)
    return dhigh(1, h, m) + 1 >= dlow(-1, h + 1, m)


TABLE1_HEADER = ("M", "4M+1", "dlow", "S", "D")


def table1_rows(Ms: Iterable[int] = range(2, 13)) -> list[tuple[int, int, int, int, int]]:
    return [(M, 4 * M + 1, dlow(-1, h_min(M), M), S(M), D(M)) for M in Ms]


def table1_csv(Ms: Iterable[int] = range(2, 13)) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE1_HEADER)
    w.writerows(table1_rows(Ms))
    return buf.getvalue()
