"""Planar linear systems L_d(m_1, ..., m_k) and their dimension bookkeeping.

A system is a degree together with a multiset of base-point multiplicities at
general points of the plane.  Everything here is exact integer arithmetic.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

_INT64_MAX = 2**63 - 1


def binom2(n: int) -> int:
    """binom(n, 2) extended to all integers as n(n-1)/2."""
    return n * (n - 1) // 2


def conditions(m: int) -> int:
    """Number of linear conditions imposed by an m-fold point."""
    return binom2(m + 1) if m > 0 else 0


def monomials(d: int) -> int:
    """Dimension of the space of degree-d forms in three variables."""
    return binom2(d + 2) if d >= 0 else 0


def _check_width(value: int) -> int:
    if not -_INT64_MAX <= value <= _INT64_MAX:
        raise OverflowError(f"combinatorial quantity {value} exceeds 64-bit range")
    return value


@dataclass(frozen=True, order=True)
class LinearSystem:
    """Degree-d plane curves with the given multiplicities at general points.

    Multiplicities are stored sorted descending with zeros dropped, so equal
    systems compare and hash equal regardless of input order.
    """

    d: int
    mults: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError(f"degree must be nonnegative, got {self.d}")
        ms = tuple(int(m) for m in self.mults)
        if any(m < 0 for m in ms):
            raise ValueError(f"multiplicities must be nonnegative: {ms}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "mults", tuple(sorted((m for m in ms if m > 0), reverse=True)))

    @classmethod
    def of(cls, d: int, *mults: int) -> "LinearSystem":
        return cls(d, tuple(mults))

    @classmethod
    def from_groups(cls, d: int, groups: Iterable[tuple[int, int]]) -> "LinearSystem":
        """Build L_d(m_1^{k_1}, ...) from (multiplicity, count) pairs."""
        ms: list[int] = []
        for m, k in groups:
            ms.extend([m] * k)
        return cls(d, tuple(ms))

    @property
    def k(self) -> int:
        return len(self.mults)

    @property
    def max_mult(self) -> int:
        return self.mults[0] if self.mults else 0

    def groups(self) -> list[tuple[int, int]]:
        """(multiplicity, count) pairs, largest multiplicity first."""
        c = Counter(self.mults)
        return sorted(c.items(), reverse=True)

    def without_simple_points(self) -> "LinearSystem":
        return LinearSystem(self.d, tuple(m for m in self.mults if m >= 2))

    @property
    def simple_points(self) -> int:
        return sum(1 for m in self.mults if m == 1)

    def to_json(self) -> dict:
        return {"d": self.d, "m": list(self.mults)}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearSystem":
        return cls(int(obj["d"]), tuple(int(m) for m in obj.get("m", [])))

    def __str__(self) -> str:
        if not self.mults:
            return f"L_{self.d}()"
        parts = []
        for m, k in sorted(Counter(self.mults).items()):
            parts.append(f"{m}" if k == 1 else f"{m}^{k}")
        return f"L_{self.d}({', '.join(parts)})"


def canonicalize(sys: LinearSystem) -> LinearSystem:
    # construction already canonicalizes; kept as an explicit operation
    return LinearSystem(sys.d, sys.mults)


def virtual_dimension(sys: LinearSystem) -> int:
    total = monomials(sys.d) - sum(conditions(m) for m in sys.mults) - 1
    return _check_width(total)


def expected_dimension(sys: LinearSystem) -> int:
    return max(virtual_dimension(sys), -1)


def pad_with_simple_points(sys: LinearSystem) -> LinearSystem:
    """Append simple points until the virtual dimension is at most -1."""
    extra = max(virtual_dimension(sys) + 1, 0)
    if extra == 0:
        return sys
    return LinearSystem(sys.d, sys.mults + (1,) * extra)


@dataclass(frozen=True)
class DimensionReport:
    virtual: int
    expected: int
    actual: Optional[int] = None

    def __post_init__(self) -> None:
        if self.expected != max(self.virtual, -1):
            raise ValueError("expected dimension must be max(virtual, -1)")
        if self.actual is not None and self.actual < self.expected:
            raise ValueError(
                f"actual dimension {self.actual} below expected {self.expected}"
            )

    @property
    def special(self) -> Optional[bool]:
        if self.actual is None:
            return None
        return self.actual > self.expected

    @classmethod
    def for_system(cls, sys: LinearSystem, actual: Optional[int] = None) -> "DimensionReport":
        v = virtual_dimension(sys)
        return cls(v, max(v, -1), actual)
