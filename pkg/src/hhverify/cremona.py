"""(-1)-curves, quadratic Cremona reduction and forced base curves.

Curve classes live on the blow-up of the plane at the base points:
``(e; n_1, ..., n_r)`` stands for e*E_0 - sum n_i*E_i.  Points are general, so
a class may be put on any subset of the points; pairing both multiplicity
vectors sorted descending gives the most negative intersection.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .linsys import LinearSystem, expected_dimension


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CurveClass:
    e: int
    n: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))

    @property
    def canonical_degree(self) -> int:
        # -K . C
        return 3 * self.e - sum(self.n)

    @property
    def self_intersection(self) -> int:
        return self.e * self.e - sum(x * x for x in self.n)

    def sorted(self) -> "CurveClass":
        return CurveClass(self.e, tuple(sorted(self.n, reverse=True)))

    def nonzero(self) -> tuple[int, ...]:
        return tuple(x for x in sorted(self.n, reverse=True) if x)

    def __str__(self) -> str:
        return f"({self.e}; {', '.join(map(str, self.nonzero()))})"


def is_neg_curve_class(c: CurveClass) -> bool:
    return (
        c.e >= 1
        and all(x >= 0 for x in c.n)
        and c.canonical_degree == 1
        and c.self_intersection == -1
    )


@dataclass(frozen=True)
class NegCurveClass(CurveClass):
    """A (-1)-class: 3e - sum n = 1 and e^2 - sum n^2 = -1, stored sorted."""

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "n", tuple(sorted((x for x in self.n if x), reverse=True)))
        if not is_neg_curve_class(self):
            raise ValueError(f"({self.e}; {self.n}) is not a (-1)-class")


LINE_THROUGH_TWO = NegCurveClass(1, (1, 1))
CONIC_THROUGH_FIVE = NegCurveClass(2, (1, 1, 1, 1, 1))
# the cubic through nine general points: rigid, irreducible, self-intersection 0
ANTICANONICAL_CUBIC = CurveClass(3, (1,) * 9)


def intersect(sys: LinearSystem, c: CurveClass) -> int:
    """d*e - sum m_i n_i with both vectors sorted descending and paired."""
    n = sorted(c.n, reverse=True)
    if len(n) != sys.k:
        raise DimensionMismatch(f"class has {len(n)} coefficients, system has {sys.k} points")
    return sys.d * c.e - sum(m * x for m, x in zip(sys.mults, n))


def _pairing(sys: LinearSystem, c: CurveClass) -> Optional[int]:
    # like intersect, but pads the class with zeros; None if it needs too many points
    nz = c.nonzero()
    if len(nz) > sys.k:
        return None
    return sys.d * c.e - sum(m * x for m, x in zip(sys.mults, nz))


# ---------------------------------------------------------------- Cremona


@dataclass(frozen=True)
class CremonaStep:
    before: LinearSystem
    s: int
    after: Optional[LinearSystem]  # None once the degree is negative
    clamped: int  # total amount by which multiplicities went below zero

    def to_json(self) -> dict:
        return {
            "before": self.before.to_json(),
            "s": self.s,
            "after": self.after.to_json() if self.after is not None else None,
            "clamped": self.clamped,
        }


def cremona_excess(d: int, mults: Sequence[int]) -> int:
    top = sorted(mults, reverse=True)[:3]
    top += [0] * (3 - len(top))
    return sum(top) - d


def cremona_step(sys: LinearSystem) -> CremonaStep:
    """One quadratic transformation based at the three largest points."""
    ms = list(sys.mults) + [0] * max(0, 3 - sys.k)
    s = ms[0] + ms[1] + ms[2] - sys.d
    if s <= 0:
        return CremonaStep(sys, s, sys, 0)
    new = [ms[0] - s, ms[1] - s, ms[2] - s] + ms[3:]
    clamped = sum(-x for x in new if x < 0)
    nd = sys.d - s
    after = LinearSystem(nd, tuple(max(x, 0) for x in new)) if nd >= 0 else None
    return CremonaStep(sys, s, after, clamped)


def signed_virtual_dimension(d: int, mults: Iterable[int]) -> int:
    # binomials extended to negative multiplicities, as in the class computation
    return (d + 2) * (d + 1) // 2 - sum(m * (m + 1) // 2 for m in mults) - 1


def cremona_reduce(sys: LinearSystem) -> tuple[Optional[LinearSystem], list[CremonaStep]]:
    """Apply quadratic transformations until the system is in standard form.

    Returns the terminal system (None when the degree went negative, i.e. the
    system is empty) and the step log.  Actual dimensions agree along the
    chain; virtual dimensions agree on every step with ``clamped == 0``.
    """
    steps: list[CremonaStep] = []
    cur: Optional[LinearSystem] = sys
    while cur is not None:
        st = cremona_step(cur)
        if st.s <= 0:
            break
        steps.append(st)
        cur = st.after
    return cur, steps


def is_standard(sys: LinearSystem) -> bool:
    return cremona_excess(sys.d, sys.mults) <= 0


def reduce_class(c: CurveClass) -> tuple[CurveClass, int]:
    """Cremona-reduce a curve class down to degree one; returns (class, steps)."""
    e, n = c.e, sorted(c.n, reverse=True)
    steps = 0
    while e > 1:
        n += [0] * max(0, 3 - len(n))
        s = n[0] + n[1] + n[2] - e
        if s <= 0:
            break
        e -= s
        n = sorted([n[0] - s, n[1] - s, n[2] - s] + n[3:], reverse=True)
        steps += 1
        if n and n[-1] < 0:
            break
    return CurveClass(e, tuple(x for x in n if x)), steps


def reduces_to_line(c: CurveClass) -> bool:
    red, _ = reduce_class(c)
    return red.e == 1 and red.nonzero() == (1, 1) and all(x >= 0 for x in red.n)


# ---------------------------------------------------------------- catalog


def _partitions(total: int, squares: int, cap: int, slots: int) -> Iterable[tuple[int, ...]]:
    """Nonincreasing tuples of positive parts <= cap with given sum and sum of squares."""
    if total == 0:
        if squares == 0:
            yield ()
        return
    if slots == 0 or cap == 0:
        return
    # need squares <= cap*total and squares >= total^2/slots
    if squares > cap * total or squares * slots < total * total:
        return
    top = min(cap, total)
    for p in range(top, 0, -1):
        if p * p > squares:
            continue
        for rest in _partitions(total - p, squares - p * p, p, slots - 1):
            yield (p,) + rest


@lru_cache(maxsize=None)
def _neg_curves_of_degree(e: int) -> tuple[NegCurveClass, ...]:
    cap = 1 if e == 1 else e - 1
    out = []
    for n in _partitions(3 * e - 1, e * e + 1, cap, 3 * e - 1):
        c = CurveClass(e, n)
        if reduces_to_line(c):
            out.append(NegCurveClass(e, n))
    return tuple(out)


def enumerate_neg_curves(r: int, e_max: int) -> list[NegCurveClass]:
    """All (-1)-classes of degree at most e_max supported on at most r points."""
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    out = []
    for e in range(1, e_max + 1):
        out.extend(c for c in _neg_curves_of_degree(e) if len(c.n) <= r)
    return out


class Catalog:
    """Read-only (-1)-class catalog shared by the classifiers."""

    def __init__(self, e_max: int = 13, r: int = 10**6):
        self.e_max = e_max
        self.classes = tuple(enumerate_neg_curves(r, e_max))

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def most_negative(self, sys: LinearSystem) -> tuple[Optional[NegCurveClass], int]:
        best, best_val = None, 0
        for c in self.classes:
            v = _pairing(sys, c)
            if v is not None and v < best_val:
                best, best_val = c, v
        return best, best_val

    def forcing(self, sys: LinearSystem) -> list[tuple[NegCurveClass, int]]:
        """Every class meeting ``sys`` negatively, with sigma = -intersection."""
        out = []
        for c in self.classes:
            v = _pairing(sys, c)
            if v is not None and v < 0:
                out.append((c, -v))
        return out

    def dumps(self) -> str:
        return "".join(f"{c.e}: {' '.join(map(str, c.n))}\n" for c in self.classes)

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps())

    @staticmethod
    def parse(text: str) -> list[NegCurveClass]:
        out = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            e, _, rest = line.partition(":")
            out.append(NegCurveClass(int(e), tuple(int(x) for x in rest.split())))
        return out


@lru_cache(maxsize=4)
def default_catalog(e_max: int = 13) -> Catalog:
    return Catalog(e_max)


# ---------------------------------------------------------------- splitting


def subtract(sys: LinearSystem, c: CurveClass, sigma: int = 1) -> Optional[LinearSystem]:
    """sys - sigma*c with the class on the largest points; None if degree < 0."""
    nd = sys.d - sigma * c.e
    if nd < 0:
        return None
    nz = c.nonzero()
    ms = list(sys.mults)
    for i, x in enumerate(nz):
        ms[i] = max(ms[i] - sigma * x, 0)
    return LinearSystem(nd, tuple(ms))


@dataclass(frozen=True)
class Split:
    curve: CurveClass
    sigma: int
    residual: Optional[LinearSystem]

    def to_json(self) -> dict:
        return {
            "curve": {"e": self.curve.e, "n": list(self.curve.nonzero())},
            "sigma": self.sigma,
            "residual": self.residual.to_json() if self.residual is not None else None,
        }


def _cubic_forced(sys: LinearSystem) -> bool:
    # an effective divisor meeting the (rigid, elliptic) cubic through nine
    # general points non-positively must contain it: for D.F = 0 the restriction
    # of D to F would be a trivial degree-zero class, which general points rule out
    if sys.k < 9 or sys.d < 1:
        return False
    return 3 * sys.d - sum(sys.mults[:9]) <= 0


def next_forced_split(sys: LinearSystem, catalog: Catalog) -> Optional[Split]:
    c, v = catalog.most_negative(sys)
    if c is not None:
        return Split(c, -v, subtract(sys, c, -v))
    if _cubic_forced(sys):
        return Split(ANTICANONICAL_CUBIC, 1, subtract(sys, ANTICANONICAL_CUBIC, 1))
    return None


def split_chain(sys: LinearSystem, catalog: Catalog, limit: int = 10_000) -> tuple[list[Split], Optional[LinearSystem]]:
    """Peel forced curves off until none is forced, the degree goes negative,
    or a point is heavier than the degree.  The final residual has the same
    actual dimension as ``sys`` (None means the system is empty)."""
    chain: list[Split] = []
    cur: Optional[LinearSystem] = sys
    while cur is not None and len(chain) < limit:
        if cur.k and cur.max_mult > cur.d:
            return chain, None
        sp = next_forced_split(cur, catalog)
        if sp is None:
            break
        chain.append(sp)
        cur = sp.residual
    return chain, cur


@dataclass(frozen=True)
class SplitCertificate:
    curve: NegCurveClass
    sigma: int
    residual: LinearSystem
    chain: tuple[Split, ...] = ()
    witness: Optional[LinearSystem] = None  # system whose expected dimension exceeds e(sys)

    def __post_init__(self) -> None:
        if self.sigma < 1:
            raise ValueError("sigma must be positive")

    def to_json(self) -> dict:
        return {
            "curve": {"e": self.curve.e, "n": list(self.curve.n)},
            "sigma": self.sigma,
            "residual": self.residual.to_json(),
            "chain": [s.to_json() for s in self.chain],
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def classify_special_by_neg_curve(
    sys: LinearSystem, catalog: Optional[Catalog] = None, require_residual_gain: bool = True
) -> Optional[SplitCertificate]:
    """Certify speciality from a (-1)-curve met with multiplicity >= 2.

    With ``require_residual_gain`` (the default) the curve is removed and the
    residual, after peeling any further forced curves, must have expected
    dimension above e(sys); this is a proof.  Without it, sigma >= 2 alone is
    reported, which is the conjecture's criterion and needs sys nonempty.
    """
    catalog = catalog or default_catalog()
    e0 = expected_dimension(sys)
    for c, sigma in catalog.forcing(sys):
        if sigma < 2:
            continue
        res = subtract(sys, c, sigma)
        if res is None:
            continue
        if not require_residual_gain:
            return SplitCertificate(c, sigma, res)
        if expected_dimension(res) > e0:
            return SplitCertificate(c, sigma, res, witness=res)
        chain, final = split_chain(res, catalog)
        if final is not None and expected_dimension(final) > e0:
            return SplitCertificate(c, sigma, res, tuple(chain), final)
    return None


@dataclass(frozen=True)
class OverloadCertificate:
    chain: tuple[Split, ...]
    reason: str  # "degree" or "multiplicity"
    last: Optional[LinearSystem]

    def to_json(self) -> dict:
        return {
            "chain": [s.to_json() for s in self.chain],
            "reason": self.reason,
            "last": self.last.to_json() if self.last is not None else None,
            "reconstruction": True,
        }


def classify_empty_by_base_overload(
    sys: LinearSystem, catalog: Optional[Catalog] = None
) -> Optional[OverloadCertificate]:
    """Certify emptiness when forced curves use up more than the degree."""
    catalog = catalog or default_catalog()
    chain: list[Split] = []
    cur: Optional[LinearSystem] = sys
    while cur is not None:
        if cur.k and cur.max_mult > cur.d:
            return OverloadCertificate(tuple(chain), "multiplicity", cur)
        sp = next_forced_split(cur, catalog)
        if sp is None:
            return None
        chain.append(sp)
        cur = sp.residual
    return OverloadCertificate(tuple(chain), "degree", None)
